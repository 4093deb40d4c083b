//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`] under degrevlex, so the
//! map is always canonical: no zero coefficients are stored and two
//! polynomials are equal exactly when their maps are.

mod gcd;
mod monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use self::gcd::content_gcd;
pub use self::monomial::Monomial;

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`; panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact text of a rational: `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("target degree {bound} is below the polynomial degree {degree}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("gcd of an empty or all-zero list is undefined")]
    AllZero,
    #[error("polynomial has zero constant term and is not a unit at the origin")]
    NotUnit,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(Rational::one(), nvars)
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        Poly::monomial(Monomial::one(nvars), c)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable x{i} outside {nvars} variables");
        Poly::monomial(Monomial::var(i, nvars), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending degrevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest degree of a nonzero term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// True for zero and for polynomials whose terms share one degree.
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some() || self.is_zero()
    }

    /// The common degree of all terms, when there is one (zero has none).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// Highest variable index that occurs in some term.
    pub fn max_variable(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.involves(v))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_same(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::NvarsMismatch { left: self.nvars, right: other.nvars })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_same(other)?;
        Ok(self * other)
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Poly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: i, nvars: self.nvars });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e > 0 {
                out.add_term(m.with_exponent(i, e - 1), c * int(e as i64));
            }
        }
        Ok(out)
    }

    pub(crate) fn diff(&self, i: usize) -> Poly {
        self.partial_derivative(i).expect("derivative index checked by caller")
    }

    pub fn homogeneous_component(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `order`.
    pub fn truncate(&self, order: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Composition `p(q_0, ..., q_{n-1})`; all `q_i` share one arity.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, found: images.len() });
        }
        let target = images.first().map(Poly::nvars).unwrap_or(0);
        for q in images {
            if q.nvars != target {
                return Err(PolyError::NvarsMismatch { left: target, right: q.nvars });
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|_| vec![Poly::one(target)]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone(), target);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out += &t;
        }
        Ok(out)
    }

    /// `p(x + a)`: moves the point `a` to the origin.
    pub fn translate(&self, point: &[Rational]) -> Result<Poly, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, found: point.len() });
        }
        let images: Vec<Poly> = point
            .iter()
            .enumerate()
            .map(|(i, a)| Poly::var(i, self.nvars) + Poly::constant(a.clone(), self.nvars))
            .collect();
        self.substitute(&images)
    }

    /// Sets `x_chart = 1`; the variable count is unchanged.
    pub fn dehomogenize(&self, chart: usize) -> Result<Poly, PolyError> {
        if chart >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: chart, nvars: self.nvars });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.with_exponent(chart, 0), c.clone());
        }
        Ok(out)
    }

    /// Multiplies each term by the power of `x_chart` that lifts it to degree `d`.
    pub fn homogenize(&self, chart: usize, d: u32) -> Result<Poly, PolyError> {
        if chart >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: chart, nvars: self.nvars });
        }
        if let Some(deg) = self.total_degree() {
            if deg > d {
                return Err(PolyError::DegreeBound { degree: deg, bound: d });
            }
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let lift = d - m.degree();
            out.add_term(m.with_exponent(chart, m.exponent(chart) + lift), c.clone());
        }
        Ok(out)
    }

    /// Deletes variable `i` (which must not occur) and shifts the later indices down.
    pub fn remove_variable(&self, i: usize) -> Poly {
        assert!(!self.involves(i), "x{i} still occurs");
        Poly {
            nvars: self.nvars - 1,
            terms: self.terms.iter().map(|(m, c)| (m.removed(i), c.clone())).collect(),
        }
    }

    /// Inserts a fresh variable at index `i`.
    pub fn insert_variable(&self, i: usize) -> Poly {
        Poly {
            nvars: self.nvars + 1,
            terms: self.terms.iter().map(|(m, c)| (m.inserted(i, 0), c.clone())).collect(),
        }
    }

    /// Appends unused variables up to `nvars`.
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        Poly {
            nvars,
            terms: self.terms.iter().map(|(m, c)| (m.extended(nvars), c.clone())).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Exact quotient `self / q`, or `None` when `q` does not divide `self`.
    pub fn div_exact(&self, q: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, q.nvars, "variable count mismatch");
        let (lm, lc) = q.leading_term()?;
        let (lm, lc_inv) = (lm.clone(), lc.recip());
        let mut r = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((rm, rc)) = r.leading_term() {
            if !lm.divides(rm) {
                return None;
            }
            let m = lm.quotient_of(rm);
            let c = rc * &lc_inv;
            r -= &q.mul_monomial(&m, &c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, by exponent.
    pub(crate) fn coefficients_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(var))
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(m.with_exponent(var, 0), c.clone());
        }
        out
    }

    /// Power series inverse truncated at total degree `order`.
    pub fn series_inverse(&self, order: u32) -> Result<Poly, PolyError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(PolyError::NotUnit);
        }
        // 1/p = (1/c) * sum h^k with h = 1 - p/c
        let cinv = c.recip();
        let h = Poly::one(self.nvars) - self.scale(&cinv);
        let mut acc = Poly::one(self.nvars);
        let mut hk = Poly::one(self.nvars);
        for _ in 0..order {
            hk = (&hk * &h).truncate(order);
            if hk.is_zero() {
                break;
            }
            acc += &hk;
        }
        Ok(acc.scale(&cinv).truncate(order))
    }

    /// Multiplies through by the lcm of the denominators and divides by the
    /// content of the numerators, giving an integer primitive polynomial.
    pub fn integer_primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&l / c.denom());
            g = g.gcd(&n);
        }
        let f = Rational::new(l, g);
        let p = self.scale(&f);
        if p.leading_coefficient().map(|c| c.is_negative()).unwrap_or(false) {
            -p
        } else {
            p
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.nvars)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
