//! Polynomial differential forms and vector fields.
//!
//! A [`KForm`] of degree `k` is stored on the basis `dx_I`, `I` a strictly
//! increasing index tuple, so every sign is resolved when a term is built and
//! equality is a map comparison. Zero forms keep their degree.

mod field;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Monomial, Poly, PolyError, Rational};

pub use self::field::{field_wedge_minors, radial_field, PolyVectorField};

/// Largest ambient dimension an [`IndexSet`] can address.
pub const MAX_VARS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("cannot contract a 0-form")]
    ContractZeroForm,
    #[error("form degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("index set {0:?} is not strictly increasing or out of range")]
    BadIndexSet(Vec<usize>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Strictly increasing tuple of variable indices, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn new(indices: &[usize]) -> Option<IndexSet> {
        let mut mask = 0u64;
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= MAX_VARS || prev.is_some_and(|p| p >= i) {
                return None;
            }
            mask |= 1 << i;
            prev = Some(i);
        }
        Some(IndexSet(mask))
    }

    pub fn singleton(i: usize) -> IndexSet {
        IndexSet(1 << i)
    }

    pub fn full(n: usize) -> IndexSet {
        if n == 64 {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..MAX_VARS).filter(move |i| mask >> i & 1 == 1)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Number of elements of `self` strictly greater than `i`.
    fn count_above(self, i: usize) -> u32 {
        if i >= 63 {
            0
        } else {
            (self.0 >> (i + 1)).count_ones()
        }
    }

    /// Sign and union for `dx_self ^ dx_other`; `None` if they overlap.
    pub fn merge(self, other: IndexSet) -> Option<(bool, IndexSet)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: u32 = other.indices().map(|j| self.count_above(j)).sum();
        Some((inversions % 2 == 1, IndexSet(self.0 | other.0)))
    }

    /// Removes `i`; the flag is set when moving `dx_i` to the front costs a sign.
    pub fn remove(self, i: usize) -> Option<(bool, IndexSet)> {
        if !self.contains(i) {
            return None;
        }
        let pos = (self.0 & ((1u64 << i) - 1)).count_ones();
        Some((pos % 2 == 1, IndexSet(self.0 & !(1 << i))))
    }

    /// All index sets of size `k` drawn from `0..n`, in increasing tuple order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            if cur.len() == k {
                out.push(IndexSet::new(cur).unwrap());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices().cmp(other.indices())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.indices() {
            if !first {
                write!(f, "^")?;
            }
            first = false;
            write!(f, "dx{i}")?;
        }
        Ok(())
    }
}

/// Polynomial differential form of a fixed degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    degree: usize,
    nvars: usize,
    terms: BTreeMap<IndexSet, Poly>,
}

impl KForm {
    pub fn zero(degree: usize, nvars: usize) -> KForm {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        KForm { degree, nvars, terms: BTreeMap::new() }
    }

    /// A function regarded as a 0-form.
    pub fn function(p: Poly) -> KForm {
        let nvars = p.nvars();
        KForm::basis(IndexSet::EMPTY, p, nvars)
    }

    /// `coeff * dx_I`.
    pub fn basis(set: IndexSet, coeff: Poly, nvars: usize) -> KForm {
        assert_eq!(coeff.nvars(), nvars, "coefficient arity");
        assert!(set.max_index().is_none_or(|m| m < nvars), "index out of range");
        let mut f = KForm::zero(set.len(), nvars);
        if !coeff.is_zero() {
            f.terms.insert(set, coeff);
        }
        f
    }

    pub fn dx(i: usize, nvars: usize) -> KForm {
        KForm::basis(IndexSet::singleton(i), Poly::one(nvars), nvars)
    }

    /// `dx_0 ^ ... ^ dx_{n-1}`.
    pub fn volume(nvars: usize) -> KForm {
        KForm::basis(IndexSet::full(nvars), Poly::one(nvars), nvars)
    }

    /// Builds a form from `(indices, coeff)` pairs; unordered indices are
    /// sorted with the matching sign and repeated indices give zero.
    pub fn from_terms<I>(degree: usize, nvars: usize, terms: I) -> Result<KForm, CalcError>
    where
        I: IntoIterator<Item = (Vec<usize>, Poly)>,
    {
        let mut f = KForm::zero(degree, nvars);
        for (idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= nvars) {
                return Err(CalcError::BadIndexSet(idx));
            }
            if c.nvars() != nvars {
                return Err(CalcError::NvarsMismatch { left: nvars, right: c.nvars() });
            }
            let mut sorted = idx.clone();
            let mut odd = false;
            // bubble sort tracks the permutation parity
            for a in 0..sorted.len() {
                for b in 0..sorted.len() - 1 - a {
                    if sorted[b] > sorted[b + 1] {
                        sorted.swap(b, b + 1);
                        odd = !odd;
                    }
                }
            }
            let Some(set) = IndexSet::new(&sorted) else {
                continue; // repeated index
            };
            f.add_term(set, if odd { -c } else { c });
        }
        Ok(f)
    }

    fn add_term(&mut self, set: IndexSet, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(set) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, set: &IndexSet) -> Poly {
        self.terms.get(set).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// The nonzero coefficient polynomials, in index order.
    pub fn coefficients(&self) -> Vec<Poly> {
        self.terms.values().cloned().collect()
    }

    /// Common total degree of the coefficients, if they share one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.values().map(Poly::homogeneous_degree);
        let d = it.next()??;
        it.all(|e| e == Some(d)).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Lowest total degree occurring in any coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.values().filter_map(Poly::order).min()
    }

    pub fn map_coefficients<F: FnMut(&Poly) -> Poly>(&self, mut f: F) -> KForm {
        let mut out = KForm::zero(self.degree, self.nvars);
        for (s, c) in &self.terms {
            out.add_term(*s, f(c));
        }
        out
    }

    fn try_map_coefficients<F>(&self, mut f: F) -> Result<KForm, CalcError>
    where
        F: FnMut(&Poly) -> Result<Poly, PolyError>,
    {
        let mut out = KForm::zero(self.degree, self.nvars);
        for (s, c) in &self.terms {
            out.add_term(*s, f(c)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> KForm {
        self.map_coefficients(|p| p.scale(c))
    }

    pub fn mul_poly(&self, p: &Poly) -> KForm {
        assert_eq!(p.nvars(), self.nvars, "variable count mismatch");
        self.map_coefficients(|c| c * p)
    }

    pub fn homogeneous_component(&self, d: u32) -> KForm {
        self.map_coefficients(|c| c.homogeneous_component(d))
    }

    pub fn truncate(&self, order: u32) -> KForm {
        self.map_coefficients(|c| c.truncate(order))
    }

    /// Values of the coefficients at a point, as a constant form.
    pub fn evaluate(&self, point: &[Rational]) -> Result<KForm, CalcError> {
        let n = self.nvars;
        self.try_map_coefficients(|c| Ok(Poly::constant(c.evaluate(point)?, n)))
    }

    pub fn is_zero_at(&self, point: &[Rational]) -> Result<bool, CalcError> {
        Ok(self.evaluate(point)?.is_zero())
    }

    pub fn try_wedge(&self, other: &KForm) -> Result<KForm, CalcError> {
        if self.nvars != other.nvars {
            return Err(CalcError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(self.wedge(other))
    }

    /// Exterior product. Panics on a variable count mismatch; see [`KForm::try_wedge`].
    pub fn wedge(&self, other: &KForm) -> KForm {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = KForm::zero(self.degree + other.degree, self.nvars);
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                if let Some((neg, s)) = sa.merge(*sb) {
                    let c = ca * cb;
                    out.add_term(s, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Interior product `i_X(self)`.
    pub fn contract(&self, x: &PolyVectorField) -> Result<KForm, CalcError> {
        if self.degree == 0 {
            return Err(CalcError::ContractZeroForm);
        }
        if self.nvars != x.nvars() {
            return Err(CalcError::NvarsMismatch { left: self.nvars, right: x.nvars() });
        }
        let mut out = KForm::zero(self.degree - 1, self.nvars);
        for (s, c) in &self.terms {
            for i in s.indices() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let (neg, rest) = s.remove(i).expect("index present");
                let t = c * xi;
                out.add_term(rest, if neg { -t } else { t });
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> KForm {
        let mut out = KForm::zero(self.degree + 1, self.nvars);
        for (s, c) in &self.terms {
            for j in 0..self.nvars {
                if s.contains(j) {
                    continue;
                }
                let dc = c.diff(j);
                if dc.is_zero() {
                    continue;
                }
                let (neg, set) = IndexSet::singleton(j).merge(*s).expect("disjoint");
                out.add_term(set, if neg { -dc } else { dc });
            }
        }
        out
    }

    /// `L_X w = i_X dw + d i_X w`.
    pub fn lie_derivative(&self, x: &PolyVectorField) -> Result<KForm, CalcError> {
        if self.nvars != x.nvars() {
            return Err(CalcError::NvarsMismatch { left: self.nvars, right: x.nvars() });
        }
        let d = self.exterior_derivative();
        let first = if d.degree == 0 { KForm::zero(self.degree, self.nvars) } else { d.contract(x)? };
        if self.degree == 0 {
            return Ok(first);
        }
        Ok(&first + &self.contract(x)?.exterior_derivative())
    }

    /// Pullback along the polynomial map `x_i = images[i](y)`.
    pub fn pullback(&self, images: &[Poly]) -> Result<KForm, CalcError> {
        if images.len() != self.nvars {
            return Err(CalcError::NvarsMismatch { left: self.nvars, right: images.len() });
        }
        let target = images.first().map(Poly::nvars).unwrap_or(self.nvars);
        let differentials: Vec<KForm> =
            images.iter().map(|q| KForm::function(q.clone()).exterior_derivative()).collect();
        let mut out = KForm::zero(self.degree, target);
        for (s, c) in &self.terms {
            let mut t = KForm::function(c.substitute(images)?);
            for i in s.indices() {
                t = t.wedge(&differentials[i]);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Restriction to the affine chart `x_chart = 1`, `dx_chart = 0`, with the
    /// chart variable removed from the coordinates.
    pub fn chart_restrict(&self, chart: usize) -> Result<KForm, CalcError> {
        if chart >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: chart, nvars: self.nvars }.into());
        }
        let mut out = KForm::zero(self.degree, self.nvars - 1);
        for (s, c) in &self.terms {
            if s.contains(chart) {
                continue;
            }
            let idx: Vec<usize> = s.indices().map(|i| if i > chart { i - 1 } else { i }).collect();
            let coeff = c.dehomogenize(chart)?.remove_variable(chart);
            out.add_term(IndexSet::new(&idx).expect("still increasing"), coeff);
        }
        Ok(out)
    }

    /// Coefficient of `monomial * dx_set`.
    pub fn coefficient_of(&self, set: &IndexSet, m: &Monomial) -> Rational {
        self.terms.get(set).map(|c| c.coefficient(m)).unwrap_or_else(Rational::zero)
    }

    /// Constant multiple test: returns `c` with `self == c * other`.
    pub fn ratio_to(&self, other: &KForm) -> Option<Rational> {
        let (s, c) = other.terms.iter().next()?;
        let (m, oc) = c.leading_term()?;
        let lam = self.coefficient_of(s, m) / oc;
        (self == &other.scale(&lam)).then_some(lam)
    }

    pub fn is_one_constant(&self) -> bool {
        self.degree == 0 && self.coefficient(&IndexSet::EMPTY).is_one()
    }
}

impl Add<&KForm> for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        assert!(
            self.degree == rhs.degree || self.is_zero() || rhs.is_zero(),
            "adding forms of degree {} and {}",
            self.degree,
            rhs.degree
        );
        let mut out = if self.is_zero() && !rhs.is_zero() {
            KForm::zero(rhs.degree, self.nvars)
        } else {
            KForm::zero(self.degree, self.nvars)
        };
        for (s, c) in self.terms.iter().chain(&rhs.terms) {
            out.add_term(*s, c.clone());
        }
        out
    }
}

impl Sub<&KForm> for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self + &(-rhs)
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.map_coefficients(|c| -c)
    }
}

impl Zero for KForm {
    fn zero() -> Self {
        KForm::zero(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for KForm {
    type Output = KForm;
    fn add(self, rhs: KForm) -> KForm {
        &self + &rhs
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.coefficient(&IndexSet::EMPTY));
        }
        let mut first = true;
        for (s, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm[deg {}, {} vars]({self})", self.degree, self.nvars)
    }
}

impl serde::Serialize for KForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `dx_0 ^ ... ^ dx_{n-1}`.
pub fn volume_form(nvars: usize) -> KForm {
    KForm::volume(nvars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_field, parse_form, parse_poly};

    fn form(s: &str) -> KForm {
        parse_form(s, Some(4)).unwrap()
    }

    #[test]
    fn wedge_basics() {
        let w = KForm::dx(0, 4).wedge(&KForm::dx(1, 4));
        assert_eq!(w, KForm::basis(IndexSet::new(&[0, 1]).unwrap(), Poly::one(4), 4));
        assert!(KForm::dx(0, 4).wedge(&KForm::dx(0, 4)).is_zero());
        assert_eq!(KForm::dx(0, 4).wedge(&KForm::dx(0, 4)).degree(), 2);
        let a = form("x1*dx0");
        let b = form("dx2^dx3");
        assert_eq!(a.wedge(&b), form("x1*dx0^dx2^dx3"));
        assert_eq!(form("dx1^dx0"), -&form("dx0^dx1"));
    }

    #[test]
    fn wedge_nvars_mismatch() {
        let a = KForm::dx(0, 3);
        let b = KForm::dx(0, 4);
        assert!(matches!(a.try_wedge(&b), Err(CalcError::NvarsMismatch { .. })));
    }

    #[test]
    fn contraction_examples() {
        let r = radial_field(4);
        let vol = KForm::volume(4);
        let expected = form("x0*dx1^dx2^dx3 - x1*dx0^dx2^dx3 + x2*dx0^dx1^dx3 - x3*dx0^dx1^dx2");
        assert_eq!(vol.contract(&r).unwrap(), expected);
        assert!(form("x0*dx1 - x1*dx0").contract(&r).unwrap().is_zero());
        assert_eq!(KForm::function(Poly::one(4)).contract(&r), Err(CalcError::ContractZeroForm));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(form("x0*dx1").exterior_derivative(), form("dx0^dx1"));
        assert_eq!(form("x0*dx1 - x1*dx0").exterior_derivative(), form("2*dx0^dx1"));
        let f = KForm::function(parse_poly("x0^3*x2 - x1*x3 + 7", Some(4)).unwrap());
        assert!(f.exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let v = parse_field("x1*d/dx0 + x3*d/dx2", Some(4)).unwrap();
        // x0^2 x2 dx0 -> (2 x0 x1 x2 + x0^2 x3) dx0 + x0^2 x2 dx1
        let w = form("x0^2*x2*dx0");
        assert_eq!(w.lie_derivative(&v).unwrap(), form("(2*x0*x1*x2 + x0^2*x3)*dx0 + x0^2*x2*dx1"));
        assert!(w.lie_derivative(&PolyVectorField::zero(4)).unwrap().is_zero());
    }

    #[test]
    fn pullback_and_chart() {
        let w = form("x0*dx1 - x1*dx0");
        assert_eq!(w.chart_restrict(0).unwrap(), parse_form("dx0", Some(3)).unwrap());
        // swap x0 and x1
        let imgs = vec![Poly::var(1, 4), Poly::var(0, 4), Poly::var(2, 4), Poly::var(3, 4)];
        assert_eq!(w.pullback(&imgs).unwrap(), -&w);
    }

    #[test]
    fn index_set_order_and_signs() {
        let a = IndexSet::new(&[0, 2]).unwrap();
        let b = IndexSet::new(&[1, 2]).unwrap();
        assert!(a < b);
        assert!(IndexSet::new(&[1]).unwrap().merge(IndexSet::new(&[0]).unwrap()).unwrap().0);
        assert!(IndexSet::new(&[2, 1]).is_none());
        assert_eq!(IndexSet::all_of_size(4, 2).len(), 6);
    }
}
