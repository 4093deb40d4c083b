//! Linear systems for homogeneous 1-forms on `C^4` invariant under a linear
//! field, and the local multiplicity bookkeeping at `(1:0:0:0)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::graph::{coeff_basis, CoeffBasisElement};
use super::jordan::{case_field, CaseTag, JordanCase};
use super::TheoremCError;
use crate::extcalc::{radial_field, IndexSet, KForm, PolyVectorField};
use crate::groebner::Ideal;
use crate::linalg;
use crate::parse::parse_form;
use crate::poly::{fmt_rational, Monomial, Poly, Rational};

/// Basis of `{Ω : deg coefficients = d+1, i_R Ω = 0, i_v Ω = 0 (, L_v Ω = 0)}`.
#[derive(Clone, Debug)]
pub struct KernelSystem {
    pub degree: u32,
    pub include_lie: bool,
    pub unknowns: usize,
    pub basis: Vec<KForm>,
}

impl KernelSystem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ c_i basis_i`.
    pub fn combination(&self, coeffs: &[Rational]) -> KForm {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(KForm::zero(1, 4), |acc, (b, c)| &acc + &b.scale(c))
    }

    /// Whether `Ω` lies in the span of the basis.
    pub fn contains(&self, omega: &KForm) -> bool {
        let cols: Vec<_> = self.basis.iter().map(keyed_form).collect();
        linalg::solve_columns(&cols, &keyed_form(omega)).is_some()
    }
}

fn keyed_form(f: &KForm) -> Vec<((u8, IndexSet, Monomial), Rational)> {
    keyed(0, f)
}

fn keyed(tag: u8, f: &KForm) -> Vec<((u8, IndexSet, Monomial), Rational)> {
    f.terms()
        .flat_map(|(s, p)| p.terms().map(move |(m, c)| ((tag, *s, m.clone()), c.clone())))
        .collect()
}

/// Solves the linear system over the basis `x^I dx_m`, `|I| = d+1`; the
/// basis is the reduced-echelon kernel in the fixed order of [`coeff_basis`].
pub fn kernel_system(v: &PolyVectorField, d: u32, include_lie: bool) -> KernelSystem {
    let unknowns = coeff_basis(d);
    let r = radial_field(4);
    let columns: Vec<_> = unknowns
        .iter()
        .map(|eta| {
            let f = eta.form();
            let mut col = keyed(0, &f.contract(&r).expect("1-form"));
            col.extend(keyed(1, &f.contract(v).expect("1-form")));
            if include_lie {
                col.extend(keyed(2, &f.lie_derivative(v).expect("same arity")));
            }
            col
        })
        .collect();
    let basis = linalg::kernel_of_columns(&columns)
        .into_iter()
        .map(|vec| {
            vec.into_iter().fold(KForm::zero(1, 4), |acc, (j, c)| &acc + &unknowns[j].form().scale(&c))
        })
        .collect();
    KernelSystem { degree: d, include_lie, unknowns: unknowns.len(), basis }
}

/// The coefficients whose vanishing means `(1:0:0:0)` is singular of
/// algebraic multiplicity at least 2: `I ∈ {(d+1,0,0,0), (d,1,0,0),
/// (d,0,1,0), (d,0,0,1)}`, `m ∈ {1,2,3}`.
pub fn twelve_coefficients(d: u32) -> Vec<CoeffBasisElement> {
    let is = [[d + 1, 0, 0, 0], [d, 1, 0, 0], [d, 0, 1, 0], [d, 0, 0, 1]];
    is.iter().flat_map(|i| (1..4).map(move |m| CoeffBasisElement::new(*i, m))).collect()
}

/// Outcome of the multiplicity check on a kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub case: CaseTag,
    pub degree: u32,
    pub kernel_dim: usize,
    /// Twelve-coefficient elements that are nonzero on some basis element.
    pub nonzero: Vec<CoeffBasisElement>,
    pub twelve_zero: bool,
    /// Smallest chart-0 order at the origin over the basis (generic member).
    pub min_multiplicity: Option<u32>,
    pub cross_check: bool,
}

impl MultiplicityReport {
    pub fn holds(&self) -> bool {
        self.twelve_zero && self.cross_check
    }
}

/// Order at the origin of `Ω` on the chart `x_0 = 1`.
pub fn chart0_multiplicity(omega: &KForm) -> Option<u32> {
    omega.chart_restrict(0).expect("4 variables").order()
}

/// Vanishing of the twelve coefficients on the invariant kernel, checked
/// against the chart-0 order of every basis element.
pub fn check_multiplicity_report(case: CaseTag, d: u32) -> Result<MultiplicityReport, TheoremCError> {
    if !case.is_nilpotent() {
        return Err(TheoremCError::InvalidParams(format!("case {case} is not nilpotent")));
    }
    let c = if case == CaseTag::V { JordanCase::v() } else { JordanCase::vi() };
    let ks = kernel_system(&case_field(&c), d, true);
    let twelve = twelve_coefficients(d);
    let nonzero: Vec<CoeffBasisElement> =
        twelve.iter().filter(|e| ks.basis.iter().any(|b| !e.coefficient_in(b).is_zero())).cloned().collect();
    let orders: Vec<Option<u32>> = ks.basis.iter().map(chart0_multiplicity).collect();
    let min_multiplicity = orders.iter().flatten().min().copied();
    let twelve_zero = nonzero.is_empty();
    // each basis element: twelve vanish <=> chart order >= 2
    let cross_check = ks
        .basis
        .iter()
        .zip(&orders)
        .all(|(b, o)| twelve.iter().all(|e| e.coefficient_in(b).is_zero()) == o.is_none_or(|o| o >= 2));
    Ok(MultiplicityReport { case, degree: d, kernel_dim: ks.dim(), nonzero, twelve_zero, min_multiplicity, cross_check })
}

/// `true` iff the twelve coefficients vanish on the kernel and the chart
/// orders agree.
pub fn check_multiplicity(case: CaseTag, d: u32) -> Result<bool, TheoremCError> {
    Ok(check_multiplicity_report(case, d)?.holds())
}

/// For I–III: `A_0 = x_1 B` and `b A_1 = -(a x_0 + ε x_1) B`; returns `B`.
pub fn combined_constraint(case: &JordanCase, omega: &KForm) -> Option<Poly> {
    let (a, eps, b) = case.combined_params()?;
    let x = |i| Poly::var(i, 4);
    let a0 = omega.coefficient(&IndexSet::singleton(0));
    let a1 = omega.coefficient(&IndexSet::singleton(1));
    let bb = a0.div_exact(&x(1))?;
    let lin = &x(0).scale(&a) + &x(1).scale(&eps);
    (a1.scale(&b) == -&(&lin * &bb)).then_some(bb)
}

/// Jet decomposition `V = u X + ℓ Y` of the chart field at a rank-one
/// singular point, and the resulting division verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDivisionCheck {
    pub multiplicity: Option<u32>,
    /// Linear forms cutting out the singular set: `u` from the linear part, `ℓ` from the quadratic part.
    pub u: Option<String>,
    pub l: Option<String>,
    pub x0_hat: Option<String>,
    pub y1_hat: Option<String>,
    pub jet_shape_ok: bool,
    /// `i_{X̂_0} i_{Ŷ_1 + u c} vol ≠ 0` for every constant `c`.
    pub jet_form_nonvanishing: bool,
    /// Multiplicity at least 2 together with the jet shape.
    pub divides: bool,
    pub message: String,
}

fn linear_form(coeffs: &[Rational]) -> Poly {
    let n = coeffs.len();
    coeffs.iter().enumerate().fold(Poly::zero(n), |acc, (i, c)| &acc + &Poly::var(i, n).scale(c))
}

/// Contrapositive local division test at the origin for a chart field `V`
/// whose linear part has rank one and whose quadratic part is `ℓ` times a
/// field: if `V` did not divide, the form would have multiplicity one.
pub fn local_division_check(v: &PolyVectorField, omega: &KForm) -> LocalDivisionCheck {
    let n = v.nvars();
    let multiplicity = omega.order();
    let fail = |msg: String, u: Option<String>, l: Option<String>| LocalDivisionCheck {
        multiplicity,
        u,
        l,
        x0_hat: None,
        y1_hat: None,
        jet_shape_ok: false,
        jet_form_nonvanishing: false,
        divides: false,
        message: msg,
    };
    let origin = vec![Rational::zero(); n];
    if v.evaluate(&origin).expect("arity").iter().any(|c| !c.is_zero()) {
        return fail("the origin is not a zero of V".into(), None, None);
    }
    let jac = v.jacobian_at(&origin).expect("arity");
    if linalg::rank(&jac) != 1 {
        return fail(format!("linear part has rank {}, expected 1", linalg::rank(&jac)), None, None);
    }
    // linear part = X̂_0 ⊗ u: u is the nonzero row, X̂_0 the row multipliers
    let row = jac.iter().position(|r| r.iter().any(|c| !c.is_zero())).unwrap();
    let u_coeffs = jac[row].clone();
    let pivot = u_coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let x0: Vec<Rational> = jac.iter().map(|r| &r[pivot] / &u_coeffs[pivot]).collect();
    let u = linear_form(&u_coeffs);
    // quadratic part = ℓ Ŷ_1 for a linear form ℓ
    let quad = v.homogeneous_component(2);
    let l = match crate::poly::content_gcd(quad.components()) {
        Ok(g) if !quad.is_zero() && g.total_degree() == Some(1) => g,
        _ => {
            return fail("quadratic part is not a linear form times a linear field".into(), Some(u.to_string()), None)
        }
    };
    let ind = linalg::rank(&vec![u_coeffs.clone(), (0..n).map(|i| l.coefficient(&Monomial::var(i, n))).collect()]);
    if ind != 2 {
        return fail("u and ℓ are dependent".into(), Some(u.to_string()), Some(l.to_string()));
    }
    let y1 = quad.map(|c| c.div_exact(&l).expect("gcd divides"));
    // family Ŷ_1 + u c with c = (t_0, ..., t_{n-1}) as extra variables
    let ext = 2 * n;
    let t = |i: usize| Poly::var(n + i, ext);
    let uy = u.extend_vars(ext);
    let y_family = PolyVectorField::new(
        (0..ext).map(|i| if i < n { &y1.component(i).extend_vars(ext) + &(&uy * &t(i)) } else { Poly::zero(ext) }).collect(),
    )
    .expect("arity");
    let x0_field = PolyVectorField::new(
        (0..ext).map(|i| if i < n { Poly::constant(x0[i].clone(), ext) } else { Poly::zero(ext) }).collect(),
    )
    .expect("arity");
    let vol = (0..n).fold(KForm::function(Poly::one(ext)), |acc, i| acc.wedge(&KForm::dx(i, ext)));
    let eta = vol.contract(&y_family).and_then(|f| f.contract(&x0_field)).expect("arity");
    // coefficients of x-monomials, as polynomials in t, must have no common zero
    let mut coeffs = Vec::new();
    for (_, p) in eta.terms() {
        let mut by_x: std::collections::BTreeMap<Vec<u32>, Poly> = std::collections::BTreeMap::new();
        for (m, c) in p.terms() {
            let e = m.exponents();
            let xpart = e[..n].to_vec();
            let tpart: Vec<u32> = e[n..].to_vec();
            let entry = by_x.entry(xpart).or_insert_with(|| Poly::zero(n));
            *entry += &Poly::monomial(Monomial::new(tpart), c.clone());
        }
        coeffs.extend(by_x.into_values());
    }
    let nonvanishing = Ideal::new(n, coeffs).expect("arity").groebner().is_unit();
    let x0_field_local = PolyVectorField::new(x0.iter().map(|c| Poly::constant(c.clone(), n)).collect()).unwrap();
    // reaching here: Ŷ_0 = 0, X̂_0 ≠ 0 and V_2 = ℓ Ŷ_1
    let shape_ok = true;
    let divides = nonvanishing && multiplicity.is_none_or(|m| m >= 2);
    let message = if divides {
        "multiplicity ≥ 2 excludes the non-dividing alternative".to_string()
    } else if !nonvanishing {
        "jet form may vanish: contrapositive does not apply".to_string()
    } else {
        format!("multiplicity {} at the point: jet witness of the non-dividing alternative", multiplicity.unwrap_or(0))
    };
    LocalDivisionCheck {
        multiplicity,
        u: Some(u.to_string()),
        l: Some(l.to_string()),
        x0_hat: Some(x0_field_local.to_string()),
        y1_hat: Some(y1.to_string()),
        jet_shape_ok: shape_ok,
        jet_form_nonvanishing: nonvanishing,
        divides,
        message,
    }
}

/// [`local_division_check`] for the case field and a homogeneous form, on
/// the chart `x_0 = 1` at `(1:0:0:0)`.
pub fn nilpotent_local_division_check(case: CaseTag, omega: &KForm) -> Result<LocalDivisionCheck, TheoremCError> {
    if !case.is_nilpotent() {
        return Err(TheoremCError::InvalidParams(format!("case {case} is not nilpotent")));
    }
    let c = if case == CaseTag::V { JordanCase::v() } else { JordanCase::vi() };
    let v = case_field(&c).chart_restrict(0)?;
    let w = omega.chart_restrict(0)?;
    Ok(local_division_check(&v, &w))
}

fn family(template: &str, params: [&Rational; 4]) -> KForm {
    let names = ["alpha", "beta", "gamma", "delta"];
    let mut src = template.to_string();
    for (name, p) in names.iter().zip(params) {
        src = src.replace(name, &format!("({})", fmt_rational(p)));
    }
    parse_form(&src, Some(4)).expect("family template parses")
}

/// The degree-1 forms tangent to the case V field.
pub fn case_v_family(alpha: &Rational, beta: &Rational, gamma: &Rational, delta: &Rational) -> KForm {
    family(
        "(alpha*x1*x3 + beta*x3^2)*dx0 \
         + (alpha*x1*x2 - 2*alpha*x0*x3 - beta*x2*x3 - gamma*x1*x3 - delta*x3^2)*dx1 \
         + (-alpha*x1^2 - beta*x1*x3)*dx2 \
         + (alpha*x0*x1 + 2*beta*x1*x2 - beta*x0*x3 + gamma*x1^2 + delta*x1*x3)*dx3",
        [alpha, beta, gamma, delta],
    )
}

/// The degree-1 forms tangent to the case VI field.
pub fn case_vi_family(alpha: &Rational, beta: &Rational, gamma: &Rational, delta: &Rational) -> KForm {
    family(
        "(alpha*x2*x3 + beta*x2^2)*dx0 + (-alpha*x1*x3 - beta*x1*x2)*dx1 \
         + (gamma*x3^2 + alpha*x0*x3 + delta*x2*x3 - beta*x0*x2 + beta*x1^2)*dx2 \
         + (-gamma*x2*x3 - 2*alpha*x0*x2 + alpha*x1^2 - delta*x2^2)*dx3",
        [alpha, beta, gamma, delta],
    )
}

/// The tangent field exhibited for the case V family with `α = 1`.
pub fn case_v_witness(beta: &Rational, gamma: &Rational, delta: &Rational) -> PolyVectorField {
    let one = Rational::one();
    let x = |i| Poly::var(i, 4);
    let c0 = &(&(&x(0).scale(&Rational::from_integer(2.into())) + &x(1).scale(gamma)) + &x(2).scale(beta))
        + &x(3).scale(delta);
    let c1 = &x(1) + &x(3).scale(beta);
    PolyVectorField::new(vec![c0, c1, x(2).scale(&one), Poly::zero(4)]).expect("arity")
}

/// `Ω ∧ dΩ` over a kernel, symbolically in the coefficients `c_i` of
/// `Ω = Σ c_i basis_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityReport {
    pub kernel_dim: usize,
    /// Distinct monic quadratic forms in the `c_i`; empty iff every member is integrable.
    #[serde(serialize_with = "as_strings")]
    pub conditions: Vec<Poly>,
    /// Affine dimension of the integrable cone in parameter space.
    pub integrable_dim: i64,
}

impl IntegrabilityReport {
    pub fn always_integrable(&self) -> bool {
        self.conditions.is_empty()
    }
}

fn as_strings<S: serde::Serializer>(ps: &[Poly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(Poly::to_string))
}

pub fn integrability_report(ks: &KernelSystem) -> IntegrabilityReport {
    let k = ks.dim();
    let mut coeffs: BTreeMap<(IndexSet, Monomial), Poly> = BTreeMap::new();
    let d: Vec<KForm> = ks.basis.iter().map(KForm::exterior_derivative).collect();
    for i in 0..k {
        for j in i..k {
            let mut w = ks.basis[i].wedge(&d[j]);
            if i != j {
                w = &w + &ks.basis[j].wedge(&d[i]);
            }
            let cij = &Poly::var(i, k) * &Poly::var(j, k);
            for (s, p) in w.terms() {
                for (m, c) in p.terms() {
                    let e = coeffs.entry((*s, m.clone())).or_insert_with(|| Poly::zero(k));
                    *e = &*e + &cij.scale(c);
                }
            }
        }
    }
    let mut conditions: Vec<Poly> = coeffs.into_values().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    conditions.sort_by_key(|p| p.to_string());
    conditions.dedup();
    let integrable_dim = Ideal::new(k, conditions.clone()).expect("consistent arity").dimension();
    IntegrabilityReport { kernel_dim: k, conditions, integrable_dim }
}
