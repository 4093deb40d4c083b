use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::poly::{Poly, PolyError, Rational};

use super::CalcError;

/// Polynomial vector field `sum_i v_i d/dx_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyVectorField {
    nvars: usize,
    coeffs: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self, CalcError> {
        let nvars = coeffs.len();
        for c in &coeffs {
            if c.nvars() != nvars {
                return Err(CalcError::NvarsMismatch { left: nvars, right: c.nvars() });
            }
        }
        Ok(PolyVectorField { nvars, coeffs })
    }

    pub fn zero(nvars: usize) -> Self {
        PolyVectorField { nvars, coeffs: vec![Poly::zero(nvars); nvars] }
    }

    /// `d/dx_i`.
    pub fn partial(i: usize, nvars: usize) -> Self {
        let mut v = Self::zero(nvars);
        v.coeffs[i] = Poly::one(nvars);
        v
    }

    /// Linear field `x -> S x`, i.e. `v_i = sum_j S_ij x_j`.
    pub fn linear(matrix: &[Vec<Rational>]) -> Self {
        let n = matrix.len();
        let coeffs = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), n, "square matrix expected");
                let mut p = Poly::zero(n);
                for (j, s) in row.iter().enumerate() {
                    p += &Poly::var(j, n).scale(s);
                }
                p
            })
            .collect();
        PolyVectorField { nvars: n, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn components(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.coeffs.iter().filter(|c| !c.is_zero()).map(Poly::homogeneous_degree);
        let d = it.next()??;
        it.all(|e| e == Some(d)).then_some(d)
    }

    pub fn map<F: FnMut(&Poly) -> Poly>(&self, f: F) -> Self {
        let coeffs: Vec<Poly> = self.coeffs.iter().map(f).collect();
        PolyVectorField { nvars: self.nvars, coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        self.map(|p| p * f)
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        self.map(|p| p.homogeneous_component(d))
    }

    pub fn truncate(&self, order: u32) -> Self {
        self.map(|p| p.truncate(order))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Rational>, PolyError> {
        self.coeffs.iter().map(|c| c.evaluate(point)).collect()
    }

    /// Moves `point` to the origin.
    pub fn translate(&self, point: &[Rational]) -> Result<Self, PolyError> {
        let coeffs = self.coeffs.iter().map(|c| c.translate(point)).collect::<Result<_, _>>()?;
        Ok(PolyVectorField { nvars: self.nvars, coeffs })
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out += &(c * &f.diff(i));
            }
        }
        out
    }

    /// Lie bracket `[X, Y]`.
    pub fn bracket(&self, other: &Self) -> Self {
        let coeffs = (0..self.nvars)
            .map(|i| self.apply(&other.coeffs[i]) - other.apply(&self.coeffs[i]))
            .collect();
        PolyVectorField { nvars: self.nvars, coeffs }
    }

    /// Jacobian `[d v_i / d x_j]` evaluated at `point`.
    pub fn jacobian_at(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>, PolyError> {
        self.coeffs
            .iter()
            .map(|c| (0..self.nvars).map(|j| c.diff(j).evaluate(point)).collect())
            .collect()
    }

    /// Matrix of the degree-one part: `v_i^{(1)} = sum_j S_ij x_j`.
    pub fn linear_part_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.nvars;
        self.coeffs
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| c.coefficient(&crate::poly::Monomial::var(j, n)))
                    .collect()
            })
            .collect()
    }

    /// Restriction of the projective foliation defined by this homogeneous
    /// field to the chart `x_chart = 1`: `V_j - z_j V_chart`, chart variable dropped.
    pub fn chart_restrict(&self, chart: usize) -> Result<Self, CalcError> {
        if chart >= self.nvars {
            return Err(PolyError::IndexOutOfRange { index: chart, nvars: self.nvars }.into());
        }
        let vc = self.coeffs[chart].dehomogenize(chart)?;
        let mut coeffs = Vec::with_capacity(self.nvars - 1);
        for j in (0..self.nvars).filter(|&j| j != chart) {
            let vj = self.coeffs[j].dehomogenize(chart)?;
            let c = vj - &Poly::var(j, self.nvars) * &vc;
            coeffs.push(c.remove_variable(chart));
        }
        Ok(PolyVectorField { nvars: self.nvars - 1, coeffs })
    }

    /// Pads with zero components and unused variables up to `nvars`.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        let mut coeffs: Vec<Poly> = self.coeffs.iter().map(|c| c.extend_vars(nvars)).collect();
        coeffs.resize(nvars, Poly::zero(nvars));
        PolyVectorField { nvars, coeffs }
    }
}

impl Add<&PolyVectorField> for &PolyVectorField {
    type Output = PolyVectorField;
    fn add(self, rhs: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        PolyVectorField { nvars: self.nvars, coeffs }
    }
}

impl Sub<&PolyVectorField> for &PolyVectorField {
    type Output = PolyVectorField;
    fn sub(self, rhs: &PolyVectorField) -> PolyVectorField {
        self + &(-rhs)
    }
}

impl Neg for &PolyVectorField {
    type Output = PolyVectorField;
    fn neg(self) -> PolyVectorField {
        self.map(|p| -p)
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*d/dx{i}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field[{}]({self})", self.nvars)
    }
}

impl serde::Serialize for PolyVectorField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Euler field `sum_i x_i d/dx_i`.
pub fn radial_field(nvars: usize) -> PolyVectorField {
    assert!(nvars >= 1, "radial field needs at least one variable");
    PolyVectorField { nvars, coeffs: (0..nvars).map(|i| Poly::var(i, nvars)).collect() }
}

/// The 2x2 minors `v_i w_j - v_j w_i`, `i < j`, in lexicographic pair order.
pub fn field_wedge_minors(
    v: &PolyVectorField,
    w: &PolyVectorField,
) -> Result<Vec<Poly>, CalcError> {
    if v.nvars != w.nvars {
        return Err(CalcError::NvarsMismatch { left: v.nvars, right: w.nvars });
    }
    let n = v.nvars;
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(&v.coeffs[i] * &w.coeffs[j] - &v.coeffs[j] * &w.coeffs[i]);
        }
    }
    Ok(out)
}
