//! Distributions and one-dimensional foliations on projective space in
//! homogeneous coordinates, and their affine chart restrictions.

use serde::Serialize;
use thiserror::Error;

use crate::extcalc::{field_wedge_minors, radial_field, CalcError, IndexSet, KForm, PolyVectorField};
use crate::groebner::Ideal;
use crate::linalg::{self, Echelon, SparseRow};
use crate::poly::{content_gcd, Monomial, Poly, PolyError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("form of degree {found} in {nvars} variables cannot define a {k}-dimensional distribution on P^{n}")]
    Shape { n: usize, k: usize, found: usize, nvars: usize },
    #[error("coefficients are not homogeneous of one common degree")]
    NotHomogeneous,
    #[error("the form is identically zero")]
    ZeroForm,
    #[error("the vector field is identically zero")]
    ZeroField,
    #[error("singular set has a codimension-one component: common divisor {divisor}")]
    CodimOne { divisor: Poly },
    #[error("integrability check not supported for k = {k} on P^{n}")]
    Unsupported { n: usize, k: usize },
    #[error("the vector field is a multiple of the radial field")]
    RadialMultiple,
    #[error("point {0:?} is not in projective space of the expected dimension")]
    BadPoint(Vec<String>),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `k`-dimensional distribution on `P^n`, given by a homogeneous
/// `(n-k)`-form in `n+1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjDistribution {
    n: usize,
    k: usize,
    omega: KForm,
}

/// Outcome of a decomposability test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposability {
    Holds,
    Fails,
    NotChecked,
}

/// All defining conditions of a distribution, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub radial_contraction_zero: bool,
    pub homogeneous: bool,
    pub codim_sing_ge_2: bool,
    pub decomposable: Decomposability,
    /// Common factor of the coefficients when `codim_sing_ge_2` fails.
    pub common_divisor: Option<String>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.radial_contraction_zero
            && self.homogeneous
            && self.codim_sing_ge_2
            && self.decomposable != Decomposability::Fails
    }
}

/// Gcd of the coefficients, or an error for the zero form.
fn coefficient_gcd(omega: &KForm) -> Result<Poly, GeometryError> {
    if omega.is_zero() {
        return Err(GeometryError::ZeroForm);
    }
    Ok(content_gcd(&omega.coefficients())?)
}

/// `Ok(())` when the singular set of `omega` has codimension at least two,
/// otherwise the offending common divisor. A codimension-one component of the
/// zero set is exactly an irreducible factor shared by all coefficients.
pub fn check_codim_ge_2(omega: &KForm) -> Result<(), GeometryError> {
    let g = coefficient_gcd(omega)?;
    if g.is_constant() {
        Ok(())
    } else {
        Err(GeometryError::CodimOne { divisor: g })
    }
}

impl ProjDistribution {
    /// Checks only the shape: `omega` has degree `n-k` in `n+1` variables.
    /// The defining conditions are reported by [`ProjDistribution::validate`].
    pub fn new(n: usize, k: usize, omega: KForm) -> Result<Self, GeometryError> {
        if k > n || omega.nvars() != n + 1 || omega.degree() != n - k {
            return Err(GeometryError::Shape { n, k, found: omega.degree(), nvars: omega.nvars() });
        }
        Ok(ProjDistribution { n, k, omega })
    }

    /// Codimension-one distribution on `P^n` from a 1-form in `n+1` variables.
    pub fn codim_one(omega: KForm) -> Result<Self, GeometryError> {
        let n = omega.nvars().saturating_sub(1);
        Self::new(n, n.saturating_sub(1), omega)
    }

    /// Like [`ProjDistribution::new`], but every defining condition must hold.
    pub fn checked(n: usize, k: usize, omega: KForm) -> Result<Self, GeometryError> {
        let d = Self::new(n, k, omega)?;
        if d.omega.is_zero() {
            return Err(GeometryError::ZeroForm);
        }
        if !d.omega.is_homogeneous() {
            return Err(GeometryError::NotHomogeneous);
        }
        check_codim_ge_2(&d.omega)?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// Common coefficient degree minus one.
    pub fn degree(&self) -> Result<i64, GeometryError> {
        if self.omega.is_zero() {
            return Err(GeometryError::ZeroForm);
        }
        let d = self.omega.homogeneous_degree().ok_or(GeometryError::NotHomogeneous)?;
        Ok(d as i64 - 1)
    }

    pub fn validate(&self) -> ValidationReport {
        let r = radial_field(self.nvars());
        let radial = self.omega.degree() == 0 || self.omega.contract(&r).is_ok_and(|f| f.is_zero());
        let homogeneous = !self.omega.is_zero() && self.omega.is_homogeneous();
        let (codim, divisor) = match coefficient_gcd(&self.omega) {
            Ok(g) if g.is_constant() => (true, None),
            Ok(g) => (false, Some(g.to_string())),
            Err(_) => (false, Some("0".into())),
        };
        ValidationReport {
            radial_contraction_zero: radial,
            homogeneous,
            codim_sing_ge_2: codim,
            decomposable: self.decomposability(radial),
            common_divisor: divisor,
        }
    }

    fn decomposability(&self, radial: bool) -> Decomposability {
        match self.omega.degree() {
            0 | 1 => Decomposability::Holds,
            // a 2-form is decomposable at a point iff its square vanishes there
            2 => {
                if self.omega.wedge(&self.omega).is_zero() {
                    Decomposability::Holds
                } else {
                    Decomposability::Fails
                }
            }
            // with i_R = 0 the form lives on an n-dimensional quotient, where
            // every (n-1)-form is decomposable
            p if p + 1 == self.n && radial => Decomposability::Holds,
            _ => Decomposability::NotChecked,
        }
    }

    /// Frobenius condition, for codimension one (`Ω ∧ dΩ = 0`) and for
    /// one-dimensional distributions (always integrable).
    pub fn is_integrable(&self) -> Result<bool, GeometryError> {
        if self.k == 1 {
            return Ok(true);
        }
        if self.k + 1 == self.n {
            return Ok(self.omega.wedge(&self.omega.exterior_derivative()).is_zero());
        }
        Err(GeometryError::Unsupported { n: self.n, k: self.k })
    }

    /// Ideal generated by the coefficients.
    pub fn singular_ideal(&self) -> Ideal {
        Ideal::new(self.nvars(), self.omega.coefficients()).expect("consistent arity")
    }

    /// Restriction to the chart `x_chart = 1` as an affine form.
    pub fn chart_restrict(&self, chart: usize) -> Result<KForm, GeometryError> {
        Ok(self.omega.chart_restrict(chart)?)
    }

    /// Basis of the homogeneous degree-`e` fields `V` with `i_V Ω = 0`.
    pub fn tangent_fields(&self, e: u32) -> Result<TangentFields, GeometryError> {
        tangent_fields(&self.omega, e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "degree": self.degree().ok(),
            "form": self.omega.to_string(),
            "flags": self.validate(),
        })
    }
}

/// One-dimensional foliation on `P^n` given by a homogeneous field modulo `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjFoliation1D {
    n: usize,
    v: PolyVectorField,
}

impl ProjFoliation1D {
    /// Stores the canonical representative of `v` modulo multiples of `R`.
    pub fn new(v: PolyVectorField) -> Result<Self, GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::ZeroField);
        }
        let d = v.homogeneous_degree().ok_or(GeometryError::NotHomogeneous)?;
        let r = radial_field(v.nvars());
        if field_wedge_minors(&v, &r)?.iter().all(Poly::is_zero) {
            return Err(GeometryError::RadialMultiple);
        }
        let v = canonical_representative(&v, d);
        Ok(ProjFoliation1D { n: v.nvars() - 1, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &PolyVectorField {
        &self.v
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// Degree of the defining field. This is the degree of the foliation when
    /// the singular set has codimension at least two; see [`ProjFoliation1D::saturated`].
    pub fn degree(&self) -> i64 {
        self.v.homogeneous_degree().expect("homogeneous") as i64
    }

    /// Ideal of the 2x2 minors of `(V, R)`: the zeros of `V` as a field on `P^n`.
    pub fn minors_ideal(&self) -> Ideal {
        let minors = field_wedge_minors(&self.v, &radial_field(self.nvars())).expect("same arity");
        Ideal::new(self.nvars(), minors).expect("consistent arity")
    }

    /// Singular scheme of the foliation: the minors of `(V, R)` with their
    /// common factor removed, so a codimension-one zero divisor of `V` does
    /// not count.
    pub fn singular_ideal(&self) -> Ideal {
        let minors = field_wedge_minors(&self.v, &radial_field(self.nvars())).expect("same arity");
        let g = content_gcd(&minors).expect("V is not a multiple of R");
        let reduced = minors.iter().map(|m| m.div_exact(&g).expect("gcd divides")).collect();
        Ideal::new(self.nvars(), reduced).expect("consistent arity")
    }

    /// Affine field `V_j - z_j V_chart` on the chart `x_chart = 1`.
    pub fn chart_restrict(&self, chart: usize) -> Result<PolyVectorField, GeometryError> {
        Ok(self.v.chart_restrict(chart)?)
    }

    /// Removes a codimension-one zero divisor: if the minors of `(V, R)`
    /// share a factor `g`, returns the foliation of the field `V'` of degree
    /// `deg V - deg g` with minors `minors(V, R) / g`.
    pub fn saturated(&self) -> Result<ProjFoliation1D, GeometryError> {
        let minors = field_wedge_minors(&self.v, &radial_field(self.nvars()))?;
        let g = content_gcd(&minors)?;
        if g.is_constant() {
            return Ok(self.clone());
        }
        let dg = g.total_degree().expect("nonzero");
        let target: Vec<Poly> = minors.iter().map(|m| m.div_exact(&g).expect("gcd divides")).collect();
        let e = self.degree() as u32 - dg;
        let n = self.nvars();
        let unknowns = field_unknowns(n, e);
        let r = radial_field(n);
        let columns: Vec<Vec<((usize, Monomial), Rational)>> = unknowns
            .iter()
            .map(|(i, m)| {
                let w = unit_field(n, *i, m);
                keyed_polys(&field_wedge_minors(&w, &r).expect("same arity"))
            })
            .collect();
        let rhs = keyed_polys(&target);
        let x = linalg::solve_columns(&columns, &rhs).ok_or(GeometryError::RadialMultiple)?;
        let v = field_from_vector(n, &unknowns, &x);
        ProjFoliation1D::new(v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": 1,
            "degree": self.degree(),
            "field": self.v.to_string(),
        })
    }
}

fn keyed_polys(ps: &[Poly]) -> Vec<((usize, Monomial), Rational)> {
    ps.iter()
        .enumerate()
        .flat_map(|(i, p)| p.terms().map(move |(m, c)| ((i, m.clone()), c.clone())))
        .collect()
}

/// Coordinates of homogeneous degree-`e` fields: `(component, monomial)`.
pub(crate) fn field_unknowns(n: usize, e: u32) -> Vec<(usize, Monomial)> {
    let ms = Monomial::all_of_degree(n, e);
    (0..n).flat_map(|i| ms.iter().map(move |m| (i, m.clone()))).collect()
}

pub(crate) fn unit_field(n: usize, i: usize, m: &Monomial) -> PolyVectorField {
    let mut cs = vec![Poly::zero(n); n];
    cs[i] = Poly::monomial(m.clone(), Rational::from_integer(1.into()));
    PolyVectorField::new(cs).expect("arity")
}

pub(crate) fn field_from_vector(n: usize, unknowns: &[(usize, Monomial)], x: &[Rational]) -> PolyVectorField {
    let mut cs = vec![Poly::zero(n); n];
    for ((i, m), c) in unknowns.iter().zip(x) {
        cs[*i] += &Poly::monomial(m.clone(), c.clone());
    }
    PolyVectorField::new(cs).expect("arity")
}

pub(crate) fn field_from_sparse(n: usize, unknowns: &[(usize, Monomial)], v: &SparseRow) -> PolyVectorField {
    let mut cs = vec![Poly::zero(n); n];
    for (j, c) in v {
        let (i, m) = &unknowns[*j];
        cs[*i] += &Poly::monomial(m.clone(), c.clone());
    }
    PolyVectorField::new(cs).expect("arity")
}

fn field_to_sparse(v: &PolyVectorField, unknowns: &[(usize, Monomial)]) -> SparseRow {
    unknowns
        .iter()
        .enumerate()
        .filter_map(|(j, (i, m))| {
            let c = v.component(*i).coefficient(m);
            (!num_traits::Zero::is_zero(&c)).then_some((j, c))
        })
        .collect()
}

/// Echelon form of `{m R : deg m = e - 1}` in the degree-`e` field coordinates.
fn radial_multiples(n: usize, e: u32, unknowns: &[(usize, Monomial)]) -> Echelon {
    let mut ech = Echelon::new(unknowns.len());
    if e == 0 {
        return ech;
    }
    let r = radial_field(n);
    for m in Monomial::all_of_degree(n, e - 1) {
        let g = Poly::monomial(m, Rational::from_integer(1.into()));
        ech.push(field_to_sparse(&r.mul_poly(&g), unknowns));
    }
    ech
}

/// Reduces `v` modulo `{g R}` against the echelon basis of the radial
/// multiples: pivot coordinates of that basis are cleared.
pub fn canonical_representative(v: &PolyVectorField, e: u32) -> PolyVectorField {
    let n = v.nvars();
    let unknowns = field_unknowns(n, e);
    let ech = radial_multiples(n, e, &unknowns);
    field_from_sparse(n, &unknowns, &ech.remainder(field_to_sparse(v, &unknowns)))
}

/// Fields tangent to a form, and their classes modulo `R`.
#[derive(Clone, Debug)]
pub struct TangentFields {
    pub degree: u32,
    /// Kernel basis of `V -> i_V Ω`.
    pub basis: Vec<PolyVectorField>,
    /// Canonical representatives spanning the kernel modulo `{g R}`.
    pub quotient: Vec<PolyVectorField>,
}

impl TangentFields {
    pub fn quotient_dim(&self) -> usize {
        self.quotient.len()
    }
}

/// Homogeneous degree-`e` fields `V` with `i_V Ω = 0`.
pub fn tangent_fields(omega: &KForm, e: u32) -> Result<TangentFields, GeometryError> {
    if omega.degree() == 0 {
        return Err(CalcError::ContractZeroForm.into());
    }
    let n = omega.nvars();
    let unknowns = field_unknowns(n, e);
    let columns: Vec<Vec<((IndexSet, Monomial), Rational)>> = unknowns
        .iter()
        .map(|(i, m)| {
            let img = omega.contract(&unit_field(n, *i, m)).expect("degree checked");
            img.terms()
                .flat_map(|(s, p)| p.terms().map(move |(mm, c)| ((*s, mm.clone()), c.clone())))
                .collect()
        })
        .collect();
    let kernel = linalg::kernel_of_columns(&columns);
    let basis: Vec<PolyVectorField> = kernel.iter().map(|v| field_from_sparse(n, &unknowns, v)).collect();
    let mut ech = radial_multiples(n, e, &unknowns);
    let mut quotient = Vec::new();
    for v in &kernel {
        let rem = ech.remainder(v.clone());
        if !rem.is_empty() {
            quotient.push(field_from_sparse(n, &unknowns, &rem));
            ech.push(rem);
        }
    }
    // re-reduce the earlier quotient vectors so each is canonical for the final echelon
    let base = radial_multiples(n, e, &unknowns);
    let quotient = quotient
        .into_iter()
        .map(|q| field_from_sparse(n, &unknowns, &base.remainder(field_to_sparse(&q, &unknowns))))
        .collect();
    Ok(TangentFields { degree: e, basis, quotient })
}

/// `Ω = i_{X_1} ⋯ i_{X_k} i_R (dx_0 ∧ ⋯ ∧ dx_n)`, a `k`-dimensional
/// distribution of degree `Σ deg X_i` on `P^n`.
pub fn split_construct(fields: &[PolyVectorField], n: usize) -> Result<ProjDistribution, GeometryError> {
    let nv = n + 1;
    let mut omega = KForm::volume(nv).contract(&radial_field(nv))?;
    for x in fields.iter().rev() {
        if x.nvars() != nv {
            return Err(CalcError::NvarsMismatch { left: nv, right: x.nvars() }.into());
        }
        if !x.is_zero() && x.homogeneous_degree().is_none() {
            return Err(GeometryError::NotHomogeneous);
        }
        if omega.degree() == 0 {
            return Err(GeometryError::ZeroForm);
        }
        omega = omega.contract(x)?;
    }
    check_codim_ge_2(&omega)?;
    ProjDistribution::new(n, fields.len(), omega)
}

/// Rank of the Jacobian at the origin, or the fact that the origin is not singular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearRank {
    Rank(usize),
    NonSingular,
}

/// Divides the coefficients by their gcd.
pub fn saturate_codim1(v: &PolyVectorField) -> Result<PolyVectorField, GeometryError> {
    if v.is_zero() {
        return Err(GeometryError::ZeroField);
    }
    let g = content_gcd(v.components())?;
    Ok(v.map(|c| c.div_exact(&g).expect("gcd divides")))
}

/// Jacobian rank at the origin of the saturated field.
pub fn linear_rank_at(v: &PolyVectorField) -> Result<LinearRank, GeometryError> {
    let s = saturate_codim1(v)?;
    let origin = vec![Rational::from_integer(0.into()); s.nvars()];
    if s.evaluate(&origin)?.iter().any(|c| !num_traits::Zero::is_zero(c)) {
        return Ok(LinearRank::NonSingular);
    }
    Ok(LinearRank::Rank(linalg::rank(&s.jacobian_at(&origin)?)))
}

/// Chart containing a projective point (first nonzero coordinate) and the
/// affine coordinates of the point there.
pub fn chart_of_point(point: &[Rational]) -> Result<(usize, Vec<Rational>), GeometryError> {
    let c = point
        .iter()
        .position(|x| !num_traits::Zero::is_zero(x))
        .ok_or_else(|| GeometryError::BadPoint(point.iter().map(|x| x.to_string()).collect()))?;
    let affine = point
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != c)
        .map(|(_, x)| x / &point[c])
        .collect();
    Ok((c, affine))
}

/// Linear rank of a projective foliation at a point: the chart field moved
/// to the origin.
pub fn linear_rank_at_point(g: &ProjFoliation1D, point: &[Rational]) -> Result<LinearRank, GeometryError> {
    if point.len() != g.nvars() {
        return Err(GeometryError::BadPoint(point.iter().map(|x| x.to_string()).collect()));
    }
    let (c, a) = chart_of_point(point)?;
    let local = g.chart_restrict(c)?.translate(&a)?;
    linear_rank_at(&local)
}

/// Lowest degree of a nonzero homogeneous component.
pub fn algebraic_multiplicity_at(omega: &KForm) -> Result<u32, GeometryError> {
    omega.order().ok_or(GeometryError::ZeroForm)
}

/// Twists `(1 - e, 1 + e - d)` of the splitting `O(1-e) ⊕ O(1+e-d)`.
pub fn split_type(d: i64, e: i64) -> (i64, i64) {
    (1 - e, 1 + e - d)
}

/// Projective codimension of the singular set of a foliation.
pub fn foliation_singular_codim(g: &ProjFoliation1D) -> i64 {
    g.singular_ideal().projective_codim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_form};
    use crate::poly::int;

    fn f4(s: &str) -> PolyVectorField {
        parse_field(s, Some(4)).unwrap()
    }

    #[test]
    fn degrees() {
        let d = ProjDistribution::codim_one(parse_form("x0*dx1 - x1*dx0", Some(4)).unwrap()).unwrap();
        assert_eq!(d.degree().unwrap(), 0);
        let g = ProjFoliation1D::new(f4("x1*d/dx0 + x3*d/dx2")).unwrap();
        assert_eq!(g.degree(), 1);
    }

    #[test]
    fn split_of_coordinate_fields() {
        let d = split_construct(&[f4("d/dx2"), f4("d/dx3")], 3).unwrap();
        let expected = parse_form("x0*dx1 - x1*dx0", Some(4)).unwrap();
        assert!(d.omega() == &expected || d.omega() == &-&expected);
        assert!(d.validate().all_pass());
        let r = radial_field(4);
        assert_eq!(split_construct(&[r.clone(), r], 3), Err(GeometryError::ZeroForm));
    }

    #[test]
    fn codim_one_divisor_is_named() {
        let err = split_construct(&[f4("x0*d/dx2"), f4("d/dx3")], 3).unwrap_err();
        assert_eq!(err, GeometryError::CodimOne { divisor: parse_form("x0", Some(4)).unwrap().coefficients()[0].clone() });
    }

    #[test]
    fn validation_flags() {
        let bad = ProjDistribution::codim_one(parse_form("x0*dx1", Some(4)).unwrap()).unwrap();
        let rep = bad.validate();
        assert!(!rep.radial_contraction_zero);
        // contact structure: x0 dx1 - x1 dx0 + x2 dx3 - x3 dx2
        let contact =
            ProjDistribution::codim_one(parse_form("x0*dx1 - x1*dx0 + x2*dx3 - x3*dx2", None).unwrap()).unwrap();
        assert!(contact.validate().all_pass());
        assert!(!contact.is_integrable().unwrap());
        let flat = ProjDistribution::codim_one(parse_form("x0*dx1 - x1*dx0", Some(4)).unwrap()).unwrap();
        assert!(flat.is_integrable().unwrap());
    }

    #[test]
    fn tangent_fields_of_flat_distribution() {
        let d = split_construct(&[f4("d/dx2"), f4("d/dx3")], 3).unwrap();
        let t1 = d.tangent_fields(1).unwrap();
        for v in &t1.basis {
            assert!(d.omega().contract(v).unwrap().is_zero());
        }
        let span = |fields: &[PolyVectorField], target: &PolyVectorField| {
            let unknowns = field_unknowns(4, target.homogeneous_degree().unwrap());
            let ech = Echelon::from_rows(unknowns.len(), fields.iter().map(|f| field_to_sparse(f, &unknowns)));
            ech.contains(&field_to_sparse(target, &unknowns))
        };
        assert!(span(&t1.basis, &f4("x2*d/dx3")));
        assert!(t1.quotient_dim() > 0);
        let t0 = d.tangent_fields(0).unwrap();
        assert!(span(&t0.basis, &f4("d/dx3")));
    }

    #[test]
    fn chart_restriction_representative_independent() {
        let v = f4("x1*x2*d/dx0 + x3^2*d/dx2");
        let g = crate::parse::parse_poly("x2 - 3*x0", Some(4)).unwrap();
        let w = &v + &radial_field(4).mul_poly(&g);
        assert_eq!(v.chart_restrict(0).unwrap(), w.chart_restrict(0).unwrap());
        assert_eq!(ProjFoliation1D::new(v).unwrap(), ProjFoliation1D::new(w).unwrap());
    }

    #[test]
    fn singular_schemes() {
        let g = ProjFoliation1D::new(f4("x1*d/dx0 + x3*d/dx2")).unwrap();
        assert_eq!(g.singular_ideal().projective_dimension(), 1);
        let p = ProjFoliation1D::new(f4("x3*d/dx3")).unwrap();
        assert_eq!(p.singular_ideal().projective_dimension(), 0);
        assert_eq!(p.minors_ideal().projective_dimension(), 2);
    }

    #[test]
    fn ranks() {
        let v = parse_field("x0*d/dx0 + 2*x1*d/dx1 + 3*x2*d/dx2", None).unwrap();
        assert_eq!(linear_rank_at(&v).unwrap(), LinearRank::Rank(3));
        let g = ProjFoliation1D::new(f4("x1*d/dx0 + x3*d/dx2")).unwrap();
        let at = linear_rank_at(&g.chart_restrict(0).unwrap()).unwrap();
        assert_eq!(at, LinearRank::Rank(1));
        let vi = ProjFoliation1D::new(f4("x1*d/dx0 + x2*d/dx1")).unwrap();
        assert_eq!(linear_rank_at_point(&vi, &[int(1), int(0), int(0), int(0)]).unwrap(), LinearRank::Rank(1));
        assert_eq!(linear_rank_at_point(&vi, &[int(0), int(0), int(0), int(1)]).unwrap(), LinearRank::Rank(2));
        assert_eq!(linear_rank_at_point(&vi, &[int(2), int(0), int(0), int(1)]).unwrap(), LinearRank::Rank(2));
    }

    #[test]
    fn multiplicity_and_split_types() {
        assert_eq!(algebraic_multiplicity_at(&parse_form("dx1", Some(3)).unwrap()).unwrap(), 0);
        assert_eq!(algebraic_multiplicity_at(&parse_form("x1*dx2 - x2*dx1", None).unwrap()).unwrap(), 1);
        assert_eq!(split_type(5, 0), (1, -4));
        assert_eq!(split_type(3, 1), (0, -1));
        assert_eq!(split_type(0, 0), (1, 1));
    }

    #[test]
    fn saturation_removes_common_factor() {
        // x0 * (d/dx3) has minors divisible by x0
        let g = ProjFoliation1D::new(f4("x0*d/dx3")).unwrap();
        let s = g.saturated().unwrap();
        assert_eq!(s.degree(), 0);
    }
}
