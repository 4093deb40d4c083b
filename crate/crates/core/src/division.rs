//! Division of forms and distributions by vector fields.
//!
//! Local data are polynomial germs at the origin: a distribution germ is
//! given by generators `ω = i_{Y_1} ⋯ i_{Y_k} Θ`, and a tangent field
//! `X = Σ f_j Y_j` divides it exactly when some `f_j(0) ≠ 0`. The functions
//! `f_j` are recovered by a Cramer-style contraction identity and may be
//! rational germs rather than polynomials; they are then carried as exact
//! quotients and expanded as jets when a witness is requested.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::extcalc::{CalcError, IndexSet, KForm, PolyVectorField};
use crate::geometry::{self, GeometryError, LinearRank, ProjDistribution, ProjFoliation1D};
use crate::groebner::{variety_containment, Ideal, IdealError};
use crate::linalg;
use crate::poly::{content_gcd, Monomial, Poly, PolyError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("the field is not tangent: i_X(ω) ≠ 0")]
    NonTangent,
    #[error("the field is not a combination of the generators")]
    NotInSpan,
    #[error("decomposition function f_{index} has a pole at the origin")]
    NotHolomorphic { index: usize },
    #[error("invalid generators: {0}")]
    BadGenerators(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point is not a singular point of the foliation")]
    NotSingular,
    #[error("no local generators available for chart {0}")]
    MissingGenerators(usize),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

fn zero_point(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// `i_{Y_1}(i_{Y_2}(⋯ i_{Y_k}(Θ)))`.
pub fn contract_chain(fields: &[PolyVectorField], theta: &KForm) -> Result<KForm, CalcError> {
    let mut w = theta.clone();
    for y in fields.iter().rev() {
        w = w.contract(y)?;
    }
    Ok(w)
}

/// Local generators `Y_1, …, Y_k` and a top form `Θ = u·vol` with `u(0) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGenerators {
    fields: Vec<PolyVectorField>,
    theta: KForm,
    omega: KForm,
}

impl LocalGenerators {
    pub fn new(fields: Vec<PolyVectorField>, theta: KForm) -> Result<Self, DivisionError> {
        let n = theta.nvars();
        if theta.degree() != n {
            return Err(DivisionError::BadGenerators(format!("Θ has degree {}, expected {n}", theta.degree())));
        }
        let unit = theta.coefficient(&IndexSet::full(n)).constant_term();
        if unit.is_zero() {
            return Err(DivisionError::BadGenerators("Θ vanishes at the origin".into()));
        }
        if fields.is_empty() || fields.len() > n {
            return Err(DivisionError::BadGenerators(format!("{} generators in dimension {n}", fields.len())));
        }
        let omega = contract_chain(&fields, &theta)?;
        if omega.is_zero() {
            return Err(DivisionError::BadGenerators("ω is identically zero".into()));
        }
        // a codimension-one germ of sing(ω) at 0 is a common factor vanishing at 0
        let g = content_gcd(&omega.coefficients())?;
        if g.constant_term().is_zero() {
            return Err(DivisionError::BadGenerators(format!("sing(ω) has codimension one at 0: divisor {g}")));
        }
        Ok(LocalGenerators { fields, theta, omega })
    }

    /// Generators with `Θ = dx_0 ∧ ⋯ ∧ dx_{n-1}`.
    pub fn with_volume(fields: Vec<PolyVectorField>) -> Result<Self, DivisionError> {
        let n = fields.first().map_or(0, PolyVectorField::nvars);
        Self::new(fields, KForm::volume(n))
    }

    pub fn k(&self) -> usize {
        self.fields.len()
    }

    pub fn nvars(&self) -> usize {
        self.theta.nvars()
    }

    pub fn fields(&self) -> &[PolyVectorField] {
        &self.fields
    }

    pub fn theta(&self) -> &KForm {
        &self.theta
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    /// The same generators with `point` moved to the origin.
    pub fn translate(&self, point: &[Rational]) -> Result<Self, DivisionError> {
        let fields = self.fields.iter().map(|y| y.translate(point)).collect::<Result<Vec<_>, _>>()?;
        let theta = self.theta.map_coefficients(|c| c.translate(point).expect("point length checked"));
        Self::new(fields, theta)
    }
}

/// Exact rational germ `numerator / denominator`, holomorphic at the origin
/// when the denominator does not vanish there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermQuotient {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl GermQuotient {
    pub fn polynomial(p: Poly) -> Self {
        let n = p.nvars();
        GermQuotient { numerator: p, denominator: Poly::one(n) }
    }

    /// Reduced quotient with monic denominator.
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self, PolyError> {
        if numerator.is_zero() {
            return Ok(Self::polynomial(numerator));
        }
        let g = content_gcd(&[numerator.clone(), denominator.clone()])?;
        let (p, q) = (numerator.div_exact(&g).expect("gcd"), denominator.div_exact(&g).expect("gcd"));
        let lc = q.leading_coefficient().expect("nonzero denominator").recip();
        Ok(GermQuotient { numerator: p.scale(&lc), denominator: q.scale(&lc) })
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant()
    }

    /// The polynomial value when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<Poly> {
        self.is_polynomial().then(|| self.numerator.scale(&self.denominator.constant_term().recip()))
    }

    pub fn value_at_origin(&self) -> Option<Rational> {
        let q = self.denominator.constant_term();
        (!q.is_zero()).then(|| self.numerator.constant_term() / q)
    }

    /// Taylor polynomial up to total degree `order`.
    pub fn jet(&self, order: u32) -> Result<Poly, PolyError> {
        let inv = self.denominator.series_inverse(order)?;
        Ok((&self.numerator * &inv).truncate(order))
    }

    /// `1 / self`, holomorphic when the value at the origin is nonzero.
    pub fn reciprocal(&self) -> GermQuotient {
        GermQuotient { numerator: self.denominator.clone(), denominator: self.numerator.clone() }
    }
}

/// Functions `f_j` with `X = Σ f_j Y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Polynomial(Vec<Poly>),
    Germ(Vec<GermQuotient>),
}

impl Decomposition {
    pub fn quotients(&self) -> Vec<GermQuotient> {
        match self {
            Decomposition::Polynomial(ps) => ps.iter().cloned().map(GermQuotient::polynomial).collect(),
            Decomposition::Germ(qs) => qs.clone(),
        }
    }

    pub fn values_at_origin(&self) -> Vec<Rational> {
        self.quotients().iter().map(|q| q.value_at_origin().expect("holomorphic at 0")).collect()
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, Decomposition::Polynomial(_))
    }
}

/// Ratio `a / b` of two forms that are proportional over rational functions.
fn form_ratio(a: &KForm, b: &KForm) -> Result<Option<GermQuotient>, PolyError> {
    let Some((s, bs)) = b.terms().next() else {
        return Ok(None);
    };
    let q = GermQuotient::new(a.coefficient(s), bs.clone())?;
    let consistent = a.mul_poly(&q.denominator) == b.mul_poly(&q.numerator);
    Ok(consistent.then_some(q))
}

/// Recovers `f_1, …, f_k` with `X = Σ f_j Y_j` from `f_j ω = i_{Y_1}⋯ i_X ⋯ i_{Y_k} Θ`
/// (`X` in slot `j`).
pub fn decompose_tangent(x: &PolyVectorField, gens: &LocalGenerators) -> Result<Decomposition, DivisionError> {
    if x.nvars() != gens.nvars() {
        return Err(CalcError::NvarsMismatch { left: gens.nvars(), right: x.nvars() }.into());
    }
    if !gens.omega.contract(x)?.is_zero() {
        return Err(DivisionError::NonTangent);
    }
    let mut quotients = Vec::with_capacity(gens.k());
    for j in 0..gens.k() {
        let mut fs = gens.fields.clone();
        fs[j] = x.clone();
        let numer = contract_chain(&fs, &gens.theta)?;
        let q = form_ratio(&numer, &gens.omega)?.ok_or(DivisionError::NotInSpan)?;
        if q.value_at_origin().is_none() {
            return Err(DivisionError::NotHolomorphic { index: j + 1 });
        }
        quotients.push(q);
    }
    // recombine over the common denominator: (Π q_i) X = Σ p_j (Π_{i≠j} q_i) Y_j
    let n = x.nvars();
    let mut lhs = x.clone();
    let mut rhs = PolyVectorField::zero(n);
    for (j, q) in quotients.iter().enumerate() {
        lhs = lhs.mul_poly(&q.denominator);
        let mut term = gens.fields[j].mul_poly(&q.numerator);
        for (i, other) in quotients.iter().enumerate() {
            if i != j {
                term = term.mul_poly(&other.denominator);
            }
        }
        rhs = &rhs + &term;
    }
    if lhs != rhs {
        return Err(DivisionError::NotInSpan);
    }
    if quotients.iter().all(GermQuotient::is_polynomial) {
        Ok(Decomposition::Polynomial(quotients.iter().map(|q| q.as_polynomial().unwrap()).collect()))
    } else {
        Ok(Decomposition::Germ(quotients))
    }
}

/// A verified `β` with `i_X β = ω`, exactly or up to a jet order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `i_X β = ω` exactly; `replaced` is the generator slot taken by `X`.
    Exact { beta: KForm, replaced: usize },
    /// `i_X β - ω` has no terms of degree `≤ order`.
    Jet { beta: KForm, replaced: usize, order: u32 },
}

impl Witness {
    pub fn beta(&self) -> &KForm {
        match self {
            Witness::Exact { beta, .. } | Witness::Jet { beta, .. } => beta,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Divides { witness: Witness },
    /// All decomposition functions vanish at the basepoint.
    Fails { values_at_basepoint: Vec<String> },
    /// The germ of distribution is regular (`ω(0) ≠ 0`), linear rank exactly `k`.
    Regular { linear_rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisionCertificate {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub degree_cap: Option<u32>,
}

impl DivisionCertificate {
    pub fn divides(&self) -> bool {
        matches!(self.outcome, Outcome::Divides { .. })
    }

    pub fn label(&self) -> &'static str {
        match self.outcome {
            Outcome::Divides { .. } => "DIVIDES",
            Outcome::Fails { .. } => "FAILS",
            Outcome::Regular { .. } => "REGULAR",
        }
    }
}

/// Jet order used for witnesses when `1/f_j` is not a polynomial.
pub const DEFAULT_JET_ORDER: u32 = 4;

/// Decides whether `X` divides `ω = i_{Y_1}⋯ i_{Y_k} Θ` at `basepoint`
/// (the origin when `None`).
pub fn divides_with_generators(
    x: &PolyVectorField,
    gens: &LocalGenerators,
    basepoint: Option<&[Rational]>,
) -> Result<DivisionCertificate, DivisionError> {
    divides_with_generators_to_order(x, gens, basepoint, DEFAULT_JET_ORDER)
}

pub fn divides_with_generators_to_order(
    x: &PolyVectorField,
    gens: &LocalGenerators,
    basepoint: Option<&[Rational]>,
    order: u32,
) -> Result<DivisionCertificate, DivisionError> {
    let (x, gens) = match basepoint {
        Some(p) if p.iter().any(|c| !c.is_zero()) => (x.translate(p)?, gens.translate(p)?),
        _ => (x.clone(), gens.clone()),
    };
    let dec = decompose_tangent(&x, &gens)?;
    let quotients = dec.quotients();
    let values: Vec<Rational> = quotients.iter().map(|q| q.value_at_origin().unwrap()).collect();
    let candidates: Vec<usize> = (0..values.len()).filter(|&j| !values[j].is_zero()).collect();
    if candidates.is_empty() {
        return Ok(DivisionCertificate {
            outcome: Outcome::Fails { values_at_basepoint: values.iter().map(crate::poly::fmt_rational).collect() },
            degree_cap: None,
        });
    }
    // prefer a slot whose reciprocal is polynomial: the witness is then exact
    let j = candidates
        .iter()
        .copied()
        .find(|&j| quotients[j].numerator.is_constant())
        .unwrap_or(candidates[0]);
    let mut rest = gens.fields.clone();
    rest.remove(j);
    let chain = contract_chain(&rest, &gens.theta)?;
    let sign = if j % 2 == 1 { -Rational::one() } else { Rational::one() };
    let inv = quotients[j].reciprocal();
    let witness = if let Some(inv) = inv.as_polynomial() {
        let beta = chain.mul_poly(&inv).scale(&sign);
        assert_eq!(beta.contract(&x)?, gens.omega, "exact witness must re-contract to ω");
        Witness::Exact { beta, replaced: j + 1 }
    } else {
        let beta = chain.mul_poly(&inv.jet(order)?).scale(&sign).truncate(order);
        let residual = &beta.contract(&x)? - &gens.omega;
        assert!(residual.truncate(order).is_zero(), "jet witness must agree with ω to order {order}");
        Witness::Jet { beta, replaced: j + 1, order }
    };
    Ok(DivisionCertificate { outcome: Outcome::Divides { witness }, degree_cap: None })
}

/// The two alternatives for a singular tangent field of linear rank at least `k`.
pub fn dichotomy(
    x: &PolyVectorField,
    gens: &LocalGenerators,
    basepoint: Option<&[Rational]>,
) -> Result<DivisionCertificate, DivisionError> {
    let (x, gens) = match basepoint {
        Some(p) if p.iter().any(|c| !c.is_zero()) => (x.translate(p)?, gens.translate(p)?),
        _ => (x.clone(), gens.clone()),
    };
    let origin = zero_point(x.nvars());
    if x.evaluate(&origin)?.iter().any(|c| !c.is_zero()) {
        return Err(DivisionError::Precondition("X(0) ≠ 0".into()));
    }
    let rank = linalg::rank(&x.jacobian_at(&origin)?);
    if rank < gens.k() {
        return Err(DivisionError::Precondition(format!("rank DX(0) = {rank} < {}", gens.k())));
    }
    let cert = divides_with_generators(&x, &gens, None)?;
    if cert.divides() {
        return Ok(cert);
    }
    // all f_j(0) = 0: the linear part of X lies in the span of the Y_j(0)
    let regular = !gens.omega.is_zero_at(&origin)?;
    let constants: Vec<PolyVectorField> =
        gens.fields.iter().map(|y| y.homogeneous_component(0)).collect();
    let wedge_nonzero = !contract_chain(&constants, &KForm::volume(x.nvars()))?.is_zero();
    if rank != gens.k() || !regular || !wedge_nonzero {
        return Err(DivisionError::Precondition(
            "neither alternative holds: the generators do not define a germ with locally free tangent sheaf".into(),
        ));
    }
    Ok(DivisionCertificate { outcome: Outcome::Regular { linear_rank: rank }, degree_cap: None })
}

/// `deg(α) + 2`, with `deg` the largest coefficient degree.
pub fn default_degree_cap(alpha: &KForm) -> u32 {
    alpha.terms().filter_map(|(_, c)| c.total_degree()).max().unwrap_or(0) + 2
}

fn form_unknowns(nvars: usize, degree: usize, cap: u32) -> Vec<(IndexSet, Monomial)> {
    let sets = IndexSet::all_of_size(nvars, degree);
    let monos = Monomial::all_up_to_degree(nvars, cap);
    sets.iter().flat_map(|s| monos.iter().map(move |m| (*s, m.clone()))).collect()
}

fn keyed(form: &KForm) -> Vec<((IndexSet, Monomial), Rational)> {
    form.terms()
        .flat_map(|(s, p)| p.terms().map(move |(m, c)| ((*s, m.clone()), c.clone())))
        .collect()
}

fn solve_linear_form<F>(
    nvars: usize,
    degree: usize,
    cap: u32,
    target: &KForm,
    map: F,
) -> Result<Option<KForm>, CalcError>
where
    F: Fn(&KForm) -> Result<KForm, CalcError>,
{
    let unknowns = form_unknowns(nvars, degree, cap);
    let columns = unknowns
        .iter()
        .map(|(s, m)| Ok(keyed(&map(&KForm::basis(*s, Poly::monomial(m.clone(), Rational::one()), nvars))?)))
        .collect::<Result<Vec<_>, CalcError>>()?;
    let Some(x) = linalg::solve_columns(&columns, &keyed(target)) else {
        return Ok(None);
    };
    let mut beta = KForm::zero(degree, nvars);
    for ((s, m), c) in unknowns.iter().zip(&x) {
        if !c.is_zero() {
            beta = &beta + &KForm::basis(*s, Poly::monomial(m.clone(), c.clone()), nvars);
        }
    }
    Ok(Some(beta))
}

/// `β` with `i_X β = α` and coefficient degree `≤ cap`, if one exists.
pub fn saito_solve(x: &PolyVectorField, alpha: &KForm, cap: Option<u32>) -> Result<Option<KForm>, DivisionError> {
    if alpha.degree() > 0 && !alpha.contract(x)?.is_zero() {
        return Err(DivisionError::Precondition("i_X(α) ≠ 0".into()));
    }
    let n = alpha.nvars();
    if alpha.degree() >= n {
        return Err(DivisionError::Precondition("α already has top degree".into()));
    }
    let cap = cap.unwrap_or_else(|| default_degree_cap(alpha));
    let beta = solve_linear_form(n, alpha.degree() + 1, cap, alpha, |b| b.contract(x))?;
    if let Some(b) = &beta {
        assert_eq!(&b.contract(x)?, alpha, "solution must round-trip");
    }
    Ok(beta)
}

/// `β` with `ω_1 ∧ β = α` and coefficient degree `≤ cap`, if one exists.
pub fn derham_solve(omega1: &KForm, alpha: &KForm, cap: Option<u32>) -> Result<Option<KForm>, DivisionError> {
    if omega1.degree() != 1 {
        return Err(DivisionError::Precondition("ω₁ must be a 1-form".into()));
    }
    if !omega1.try_wedge(alpha)?.is_zero() {
        return Err(DivisionError::Precondition("ω₁ ∧ α ≠ 0".into()));
    }
    if alpha.degree() == 0 {
        return Err(DivisionError::Precondition("α must have positive degree".into()));
    }
    let cap = cap.unwrap_or_else(|| default_degree_cap(alpha));
    let beta = solve_linear_form(alpha.nvars(), alpha.degree() - 1, cap, alpha, |b| Ok(omega1.wedge(b)))?;
    if let Some(b) = &beta {
        assert_eq!(&omega1.wedge(b), alpha, "solution must round-trip");
    }
    Ok(beta)
}

/// Which rank threshold to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMode {
    /// `ω` an `(n-2)`-form with `ω(0) = 0`: rank `DX(0) ≥ 2`.
    TwoDim,
    /// `ω` an `(n-k)`-form with `ω(0) = 0`: rank `DX(0) ≥ k`.
    GeneralK,
    /// Any tangent `k`-form `α`: rank `DX(0) ≥ n - k + 1`.
    FieldRank,
    /// 1-form `ω_1` and `k`-form `α` with `ω_1 ∧ α = 0`: linear-part rank `≥ k + 1`.
    DualForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCriterion {
    pub mode: RankMode,
    pub rank: usize,
    pub threshold: usize,
    pub applies: bool,
    pub witness: Option<KForm>,
    pub degree_cap: u32,
}

/// Linear part of a 1-form read as the field `Σ A_i ∂/∂x_i`.
fn form_as_field(omega1: &KForm) -> PolyVectorField {
    let n = omega1.nvars();
    PolyVectorField::new((0..n).map(|i| omega1.coefficient(&IndexSet::singleton(i))).collect()).expect("arity")
}

/// Rank-based division criteria. In `DualForm` mode `x_or_form` is ignored
/// and `omega1` must be given; otherwise `x` is the dividing field.
pub fn rank_criterion_divides(
    x: Option<&PolyVectorField>,
    omega1: Option<&KForm>,
    alpha: &KForm,
    mode: RankMode,
    cap: Option<u32>,
) -> Result<RankCriterion, DivisionError> {
    let n = alpha.nvars();
    let origin = zero_point(n);
    let cap_value = cap.unwrap_or_else(|| default_degree_cap(alpha));
    let need = |what: &str| DivisionError::Precondition(format!("{what} required for this mode"));
    let (rank, threshold) = match mode {
        RankMode::DualForm => {
            let w = omega1.ok_or_else(|| need("ω₁"))?;
            if !w.try_wedge(alpha)?.is_zero() {
                return Err(DivisionError::Precondition("ω₁ ∧ α ≠ 0".into()));
            }
            (linalg::rank(&form_as_field(w).jacobian_at(&origin)?), alpha.degree() + 1)
        }
        _ => {
            let x = x.ok_or_else(|| need("X"))?;
            if alpha.degree() == 0 || !alpha.contract(x)?.is_zero() {
                return Err(DivisionError::Precondition("i_X(α) ≠ 0".into()));
            }
            let r = linalg::rank(&x.jacobian_at(&origin)?);
            let t = match mode {
                RankMode::TwoDim => 2,
                RankMode::GeneralK => n - alpha.degree(),
                _ => n - alpha.degree() + 1,
            };
            if matches!(mode, RankMode::TwoDim) && alpha.degree() + 2 != n {
                return Err(DivisionError::Precondition("α must be an (n-2)-form".into()));
            }
            (r, t)
        }
    };
    let applies = rank >= threshold;
    let witness = if applies {
        match mode {
            RankMode::DualForm => derham_solve(omega1.unwrap(), alpha, Some(cap_value))?,
            _ => saito_solve(x.unwrap(), alpha, Some(cap_value))?,
        }
    } else {
        None
    };
    Ok(RankCriterion { mode, rank, threshold, applies, witness, degree_cap: cap_value })
}

/// Where local generators of a distribution come from.
#[derive(Clone, Debug)]
pub enum GeneratorSource {
    /// The factor fields of a split distribution `i_{X_1}⋯ i_{X_k} i_R vol`.
    Split(Vec<PolyVectorField>),
    /// Explicit affine generators per chart index.
    PerChart(Vec<(usize, LocalGenerators)>),
}

/// Generators of a split distribution on the chart `x_chart = 1`: the
/// chart-restricted factor fields and `Θ = (-1)^chart vol`.
pub fn split_generators(fields: &[PolyVectorField], chart: usize) -> Result<LocalGenerators, DivisionError> {
    let local = fields.iter().map(|x| x.chart_restrict(chart)).collect::<Result<Vec<_>, _>>()?;
    let n = fields[0].nvars() - 1;
    let sign = if chart % 2 == 1 { -Rational::one() } else { Rational::one() };
    LocalGenerators::new(local, KForm::volume(n).scale(&sign))
}

/// Verdict at one sample point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointVerdict {
    pub point: Vec<String>,
    pub chart: usize,
    pub certificate: DivisionCertificate,
}

/// Decides local division of `D` by `G` at sample points of `sing(G)`.
pub fn division_locus_sample(
    d: &ProjDistribution,
    source: &GeneratorSource,
    g: &ProjFoliation1D,
    points: &[Vec<Rational>],
) -> Result<Vec<PointVerdict>, DivisionError> {
    let sing = g.singular_ideal();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != g.nvars() {
            return Err(GeometryError::BadPoint(p.iter().map(|c| c.to_string()).collect()).into());
        }
        for gen in sing.generators() {
            if !gen.evaluate(p)?.is_zero() {
                return Err(DivisionError::NotSingular);
            }
        }
        let (chart, affine) = geometry::chart_of_point(p)?;
        let gens = match source {
            GeneratorSource::Split(fields) => split_generators(fields, chart)?,
            GeneratorSource::PerChart(list) => list
                .iter()
                .find(|(c, _)| *c == chart)
                .map(|(_, lg)| lg.clone())
                .ok_or(DivisionError::MissingGenerators(chart))?,
        };
        let gens = gens.translate(&affine)?;
        // the generators must define D near the point: ω = unit · Ω|chart
        let local_d = d.chart_restrict(chart)?.map_coefficients(|c| c.translate(&affine).expect("length"));
        let unit = form_ratio(gens.omega(), &local_d)?
            .filter(|q| q.value_at_origin().is_some_and(|v| !v.is_zero()))
            .ok_or_else(|| DivisionError::BadGenerators("generators do not define D at the point".into()))?;
        debug_assert!(!unit.numerator.constant_term().is_zero());
        let x = g.chart_restrict(chart)?.translate(&affine)?;
        let certificate = divides_with_generators(&x, &gens, None)?;
        out.push(PointVerdict { point: p.iter().map(crate::poly::fmt_rational).collect(), chart, certificate });
    }
    Ok(out)
}

/// An irreducible component of `sing(G)`, described by an ideal and a point on it.
#[derive(Clone, Debug)]
pub struct ComponentSample {
    pub ideal: Ideal,
    pub point: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremBReport {
    pub tangent: bool,
    /// Linear rank of `G` at each component's sample point.
    pub ranks: Vec<Option<usize>>,
    pub rank_at_least_2: bool,
    /// Every component meets `sing(D)`.
    pub cond1_all_components_meet: bool,
    /// Every component of dimension `n-2` meets `sing(D)`.
    pub cond2_top_components_meet: bool,
    /// `sing(G) ⊆ sing(D)`.
    pub cond3_containment: bool,
    pub consistent: bool,
    /// Sample points where the tangent sheaf of `D` is not free.
    pub not_free_at: Vec<Vec<String>>,
    /// Twists of `T_D = T_G ⊕ T_H` when the conditions hold.
    pub split_type: Option<(i64, i64)>,
}

/// Evaluates the equivalent conditions for a two-dimensional distribution
/// tangent to a one-dimensional foliation, on user-supplied components.
pub fn theorem_b_decide(
    d: &ProjDistribution,
    g: &ProjFoliation1D,
    components: &[ComponentSample],
) -> Result<TheoremBReport, DivisionError> {
    if d.nvars() != g.nvars() {
        return Err(CalcError::NvarsMismatch { left: d.nvars(), right: g.nvars() }.into());
    }
    let tangent = d.omega().contract(g.field())?.is_zero();
    if !tangent {
        return Err(DivisionError::NonTangent);
    }
    let sing_d = d.singular_ideal();
    let sing_g = g.singular_ideal();
    let n = d.n() as i64;
    let mut ranks = Vec::new();
    let mut all_meet = true;
    let mut top_meet = true;
    let mut not_free_at = Vec::new();
    for comp in components {
        let rank = match geometry::linear_rank_at_point(g, &comp.point)? {
            LinearRank::Rank(r) => Some(r),
            LinearRank::NonSingular => None,
        };
        ranks.push(rank);
        let meets = comp.ideal.sum(&sing_d)?.projective_dimension() >= 0;
        all_meet &= meets;
        if comp.ideal.projective_dimension() == n - 2 {
            top_meet &= meets;
        }
        let in_sing_d = sing_d.generators().iter().all(|q| q.evaluate(&comp.point).is_ok_and(|v| v.is_zero()));
        if in_sing_d && rank.is_some_and(|r| r >= 2) && !variety_containment(&comp.ideal, &sing_d)? {
            not_free_at.push(comp.point.iter().map(crate::poly::fmt_rational).collect());
        }
    }
    let cond3 = variety_containment(&sing_g, &sing_d)?;
    let rank_ok = ranks.iter().all(|r| r.is_some_and(|r| r >= 2));
    let consistent = all_meet == top_meet && top_meet == cond3;
    let split_type = (cond3 && consistent && not_free_at.is_empty())
        .then(|| d.degree().ok().map(|dd| geometry::split_type(dd, g.degree())))
        .flatten();
    Ok(TheoremBReport {
        tangent,
        ranks,
        rank_at_least_2: rank_ok,
        cond1_all_components_meet: all_meet,
        cond2_top_components_meet: top_meet,
        cond3_containment: cond3,
        consistent,
        not_free_at,
        split_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_form, parse_poly};
    use crate::poly::int;

    fn f(s: &str) -> PolyVectorField {
        parse_field(s, Some(3)).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, Some(3)).unwrap()
    }

    fn gens() -> LocalGenerators {
        LocalGenerators::with_volume(vec![f("d/dx0 + x2*d/dx1"), f("d/dx1 + x0*d/dx2")]).unwrap()
    }

    #[test]
    fn decompose_recovers_coefficients() {
        let g = gens();
        let x = &g.fields()[0].mul_poly(&p("x1 + 2")) + &g.fields()[1].mul_poly(&p("x0*x2"));
        assert_eq!(decompose_tangent(&x, &g).unwrap(), Decomposition::Polynomial(vec![p("x1 + 2"), p("x0*x2")]));
        assert_eq!(
            decompose_tangent(&g.fields()[0], &g).unwrap(),
            Decomposition::Polynomial(vec![p("1"), p("0")])
        );
        assert_eq!(decompose_tangent(&f("d/dx2 + d/dx0"), &g), Err(DivisionError::NonTangent));
    }

    #[test]
    fn divides_and_fails() {
        let g = gens();
        let x = &g.fields()[0] + &g.fields()[1].mul_poly(&p("x0"));
        let c = divides_with_generators(&x, &g, None).unwrap();
        assert!(c.divides());
        let x = &g.fields()[0].mul_poly(&p("x0")) + &g.fields()[1].mul_poly(&p("x1"));
        let c = divides_with_generators(&x, &g, None).unwrap();
        assert_eq!(c.label(), "FAILS");
    }

    #[test]
    fn germ_quotients_give_jet_witnesses() {
        let g = gens();
        // X = (1 + x0) Y1 + x1 Y2 divides, with 1/f_1 a genuine power series
        let x = &g.fields()[0].mul_poly(&p("1 + x0")) + &g.fields()[1].mul_poly(&p("x1"));
        let c = divides_with_generators(&x, &g, None).unwrap();
        match c.outcome {
            Outcome::Divides { witness: Witness::Jet { order, .. } } => assert_eq!(order, DEFAULT_JET_ORDER),
            other => panic!("unexpected {other:?}"),
        }
        let q = GermQuotient::new(p("1"), p("1 - x0")).unwrap();
        assert_eq!(q.jet(3).unwrap(), p("1 + x0 + x0^2 + x0^3"));
        assert_eq!(q.value_at_origin().unwrap(), int(1));
    }

    #[test]
    fn dichotomy_regular_branch() {
        // Y = d/dx0, Z = d/dx1 constant; X = x1 Y + x0 Z has rank 2 and f(0) = g(0) = 0
        let g = LocalGenerators::with_volume(vec![f("d/dx0"), f("d/dx1")]).unwrap();
        let x = f("x1*d/dx0 + x0*d/dx1");
        assert_eq!(dichotomy(&x, &g, None).unwrap().outcome, Outcome::Regular { linear_rank: 2 });
        let x = f("x0*d/dx0");
        assert!(matches!(dichotomy(&x, &g, None), Err(DivisionError::Precondition(_))));
    }

    #[test]
    fn solvers() {
        let x = f("x0*d/dx0 + 2*x1*d/dx1 + 3*x2*d/dx2");
        let gamma = parse_form("x1*dx0^dx1 + x2^2*dx1^dx2", Some(3)).unwrap();
        let alpha = gamma.contract(&x).unwrap();
        let beta = saito_solve(&x, &alpha, None).unwrap().unwrap();
        assert_eq!(beta.contract(&x).unwrap(), alpha);
        let bad = saito_solve(&f("d/dx0"), &parse_form("dx0", Some(3)).unwrap(), None);
        assert!(matches!(bad, Err(DivisionError::Precondition(_))));

        let w = KForm::function(p("x0^2 + x1^2 + x2^2")).exterior_derivative();
        let alpha = w.mul_poly(&p("x1 - 4"));
        let beta = derham_solve(&w, &alpha, None).unwrap().unwrap();
        assert_eq!(w.wedge(&beta), alpha);
        assert!(derham_solve(&w, &parse_form("dx0", Some(3)).unwrap(), None).is_err());
    }

    #[test]
    fn rank_criteria() {
        let n4 = |s: &str| parse_field(s, Some(4)).unwrap();
        let x = n4("x0*d/dx0 + x1*d/dx1");
        let alpha = parse_form("dx2^dx3", Some(4)).unwrap().mul_poly(&parse_poly("x0", Some(4)).unwrap());
        // i_X(x0 dx2^dx3) = 0
        let r = rank_criterion_divides(Some(&x), None, &alpha, RankMode::TwoDim, None).unwrap();
        assert!(r.applies);
        assert_eq!(r.rank, 2);
        let w = parse_form("x0*dx0 + x1*dx1", Some(3)).unwrap();
        let alpha = w.mul_poly(&p("x2"));
        let r = rank_criterion_divides(None, Some(&w), &alpha, RankMode::DualForm, None).unwrap();
        assert_eq!((r.rank, r.threshold, r.applies), (2, 2, true));
        assert!(r.witness.is_some());
    }

    #[test]
    fn split_generators_reproduce_the_chart_form() {
        let fs = vec![
            parse_field("x1*d/dx0 + x2*d/dx3", Some(4)).unwrap(),
            parse_field("x3*d/dx1 + x0*d/dx2", Some(4)).unwrap(),
        ];
        let d = geometry::split_construct(&fs, 3).unwrap();
        for chart in 0..4 {
            let lg = split_generators(&fs, chart).unwrap();
            assert_eq!(lg.omega(), &d.chart_restrict(chart).unwrap(), "chart {chart}");
        }
    }
}
