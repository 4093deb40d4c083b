//! Normal forms of linear vector fields on `P^3` and their recognition.
//!
//! A projective vector field is a linear field modulo the radial field, so
//! its matrix is only defined up to adding `λ I`. Recognition therefore
//! searches over rational shifts `λ` and then over the six listed normal
//! forms, returning an explicit rational similarity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::TheoremCError;
use crate::extcalc::PolyVectorField;
use crate::linalg::{self, Matrix};
use crate::poly::{fmt_rational, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl CaseTag {
    pub const ALL: [CaseTag; 6] = [CaseTag::I, CaseTag::II, CaseTag::III, CaseTag::IV, CaseTag::V, CaseTag::VI];

    pub fn is_nilpotent(self) -> bool {
        matches!(self, CaseTag::V | CaseTag::VI)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
            CaseTag::IV => "IV",
            CaseTag::V => "V",
            CaseTag::VI => "VI",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for CaseTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown case '{s}' (expected one of I, II, III, IV, V, VI)"))
    }
}

/// A normal form with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanCase {
    tag: CaseTag,
    a: Option<Rational>,
    b: Option<Rational>,
}

impl JordanCase {
    /// Validates the parameters the tag needs: `a, b` nonzero and distinct
    /// for I and IV, `a` nonzero for II and III, none for V and VI.
    pub fn new(tag: CaseTag, a: Option<Rational>, b: Option<Rational>) -> Result<Self, TheoremCError> {
        let bad = |m: &str| Err(TheoremCError::InvalidParams(format!("case {tag}: {m}")));
        let nonzero = |x: &Option<Rational>| x.as_ref().is_some_and(|x| !x.is_zero());
        match tag {
            CaseTag::I | CaseTag::IV => {
                if !nonzero(&a) || !nonzero(&b) {
                    return bad("a and b must be nonzero");
                }
                if a == b {
                    return bad("a and b must be distinct");
                }
            }
            CaseTag::II | CaseTag::III => {
                if !nonzero(&a) {
                    return bad("a must be nonzero");
                }
                if b.is_some() {
                    return bad("takes only the parameter a");
                }
            }
            CaseTag::V | CaseTag::VI => {
                if a.is_some() || b.is_some() {
                    return bad("takes no parameters");
                }
            }
        }
        Ok(JordanCase { tag, a, b })
    }

    pub fn v() -> Self {
        JordanCase { tag: CaseTag::V, a: None, b: None }
    }

    pub fn vi() -> Self {
        JordanCase { tag: CaseTag::VI, a: None, b: None }
    }

    pub fn tag(&self) -> CaseTag {
        self.tag
    }

    pub fn a(&self) -> Option<&Rational> {
        self.a.as_ref()
    }

    pub fn b(&self) -> Option<&Rational> {
        self.b.as_ref()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.tag.is_nilpotent()
    }

    /// The normal-form matrix `S` with `v = S x`.
    pub fn matrix(&self) -> Matrix {
        let z = Rational::zero;
        let mut s = vec![vec![z(); 4]; 4];
        let a = self.a.clone().unwrap_or_else(z);
        let b = self.b.clone().unwrap_or_else(z);
        match self.tag {
            CaseTag::I => {
                s[0][0] = a;
                s[1][1] = b;
            }
            CaseTag::II => {
                s[0][0] = a.clone();
                s[1][1] = a;
            }
            CaseTag::III => {
                s[0][0] = a.clone();
                s[0][1] = Rational::one();
                s[1][1] = a;
            }
            CaseTag::IV => {
                s[0][0] = a.clone();
                s[1][1] = a;
                s[2][2] = b;
            }
            CaseTag::V => {
                s[0][1] = Rational::one();
                s[2][3] = Rational::one();
            }
            CaseTag::VI => {
                s[0][1] = Rational::one();
                s[1][2] = Rational::one();
            }
        }
        s
    }

    /// `(a, ε, b)` of the combined form `(a x0 + ε x1) ∂0 + b x1 ∂1` for I–III.
    pub fn combined_params(&self) -> Option<(Rational, Rational, Rational)> {
        let a = self.a.clone()?;
        match self.tag {
            CaseTag::I => Some((a, Rational::zero(), self.b.clone()?)),
            CaseTag::II => Some((a.clone(), Rational::zero(), a)),
            CaseTag::III => Some((a.clone(), Rational::one(), a)),
            _ => None,
        }
    }
}

impl fmt::Display for JordanCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        match (&self.a, &self.b) {
            (Some(a), Some(b)) => write!(f, "(a={}, b={})", fmt_rational(a), fmt_rational(b)),
            (Some(a), None) => write!(f, "(a={})", fmt_rational(a)),
            _ => Ok(()),
        }
    }
}

impl Serialize for JordanCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The linear field `v = S x` of a normal form.
pub fn case_field(c: &JordanCase) -> PolyVectorField {
    PolyVectorField::linear(&c.matrix())
}

/// Distinct rational roots of `c_0 + c_1 t + ⋯ + c_n t^n`, or `None` when
/// the coefficients are too large to enumerate divisors.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut cs: Vec<Rational> = coeffs.to_vec();
    while cs.last().is_some_and(Zero::is_zero) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    let lead_zeros = cs.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Rational::zero());
        cs.drain(..lead_zeros);
    }
    let l = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = cs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let ps = divisors(&ints[0])?;
    let qs = divisors(ints.last().unwrap())?;
    let eval = |r: &Rational| cs.iter().rev().fold(Rational::zero(), |acc, c| acc * r + c);
    for p in &ps {
        for q in &qs {
            for sign in [1, -1] {
                let r = Rational::new(BigInt::from(*p * sign), BigInt::from(*q));
                if !roots.contains(&r) && eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64().filter(|n| *n <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    Some(out)
}

/// Jordan block sizes per rational eigenvalue, descending; `None` when some
/// eigenvalue is not rational.
pub fn jordan_type(s: &Matrix) -> Option<BTreeMap<Rational, Vec<usize>>> {
    let n = s.len();
    let roots = rational_roots(&linalg::char_poly(s))?;
    let mut out = BTreeMap::new();
    let mut total = 0;
    for mu in roots {
        let a = linalg::shift(s, &mu);
        let nullity: Vec<usize> = (0..=n).map(|k| n - linalg::rank(&linalg::mat_pow(&a, k as u32))).collect();
        // number of blocks of size >= k is nullity[k] - nullity[k-1]
        let mut blocks = Vec::new();
        for k in 1..=n {
            let at_least_k = nullity[k] - nullity[k - 1];
            let at_least_next = if k < n { nullity[k + 1] - nullity[k] } else { 0 };
            blocks.extend(std::iter::repeat_n(k, at_least_k - at_least_next));
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        total += nullity[n];
        out.insert(mu, blocks);
    }
    (total == n).then_some(out)
}

/// `v - shift·R` has matrix `P J P^{-1}`, `J` the matrix of `case`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanMatch {
    pub case: JordanCase,
    pub shift: Rational,
    /// Columns form the normal-form basis: `x = P y`.
    pub transform: Matrix,
}

fn match_type(ty: &BTreeMap<Rational, Vec<usize>>, allow_iv: bool) -> Option<JordanCase> {
    let zero = ty.get(&Rational::zero())?;
    let others: Vec<(&Rational, &Vec<usize>)> = ty.iter().filter(|(k, _)| !k.is_zero()).collect();
    let shape: Vec<&[usize]> = others.iter().map(|(_, b)| b.as_slice()).collect();
    let case = |tag, a: Option<&Rational>, b: Option<&Rational>| JordanCase::new(tag, a.cloned(), b.cloned()).ok();
    match (zero.as_slice(), shape.as_slice()) {
        ([1, 1], [[1], [1]]) => case(CaseTag::I, Some(others[0].0), Some(others[1].0)),
        ([1, 1], [[1, 1]]) => case(CaseTag::II, Some(others[0].0), None),
        ([1, 1], [[2]]) => case(CaseTag::III, Some(others[0].0), None),
        ([2, 2], []) => Some(JordanCase::v()),
        ([3, 1], []) => Some(JordanCase::vi()),
        ([1], [_, _]) if allow_iv => {
            let (a, b) = if shape[0] == [1, 1] && shape[1] == [1] {
                (others[0].0, others[1].0)
            } else if shape[0] == [1] && shape[1] == [1, 1] {
                (others[1].0, others[0].0)
            } else {
                return None;
            };
            case(CaseTag::IV, Some(a), Some(b))
        }
        _ => None,
    }
}

/// An invertible `P` with `S P = P J`, from the Sylvester kernel.
pub fn similarity(s: &Matrix, j: &Matrix) -> Option<Matrix> {
    let n = s.len();
    // unknown P_{ik} is column i*n + k; equation (r, c) of S P - P J
    let columns: Vec<Vec<((usize, usize), Rational)>> = (0..n * n)
        .map(|col| {
            let (i, k) = (col / n, col % n);
            let mut entries: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (r, row) in s.iter().enumerate() {
                if !row[i].is_zero() {
                    *entries.entry((r, k)).or_insert_with(Rational::zero) += &row[i];
                }
            }
            for (c, x) in j[k].iter().enumerate() {
                if !x.is_zero() {
                    *entries.entry((i, c)).or_insert_with(Rational::zero) -= x;
                }
            }
            entries.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    let kernel = linalg::kernel_of_columns(&columns);
    if kernel.is_empty() {
        return None;
    }
    // det is a nonzero polynomial on the kernel: seeded random combinations
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..64 {
        let mut p = vec![vec![Rational::zero(); n]; n];
        for kv in &kernel {
            let w = int(rng.gen_range(-9..=9));
            for (col, c) in kv {
                p[col / n][col % n] += &w * c;
            }
        }
        if !linalg::det(&p).is_zero() {
            debug_assert_eq!(linalg::mat_mul(s, &p), linalg::mat_mul(&p, j));
            return Some(p);
        }
    }
    None
}

fn shift_candidates(s: &Matrix) -> Option<Vec<Rational>> {
    let ty = jordan_type(s)?;
    let mut out = vec![Rational::zero()];
    out.extend(ty.keys().filter(|k| !k.is_zero()).cloned());
    Some(out)
}

/// Every `(shift, case)` under which `S` is similar to a normal form; the
/// literal form IV is only considered without shift.
pub fn jordan_matches(s: &Matrix) -> Result<Vec<JordanMatch>, TheoremCError> {
    let shifts = shift_candidates(s)
        .ok_or_else(|| TheoremCError::Classification("eigenvalues are not all rational".into()))?;
    let mut out = Vec::new();
    for lambda in shifts {
        let shifted = linalg::shift(s, &lambda);
        let ty = jordan_type(&shifted).expect("shift keeps rational eigenvalues");
        if let Some(case) = match_type(&ty, lambda.is_zero()) {
            let transform = similarity(&shifted, &case.matrix())
                .ok_or_else(|| TheoremCError::Classification("no rational similarity found".into()))?;
            out.push(JordanMatch { case, shift: lambda, transform });
        }
    }
    Ok(out)
}

/// The normal form of `v`: an unshifted match if any, otherwise the first
/// shifted one.
pub fn classify(s: &Matrix) -> Result<JordanMatch, TheoremCError> {
    let ty = jordan_type(s);
    jordan_matches(s)?.into_iter().next().ok_or_else(|| {
        let desc = ty
            .map(|t| {
                t.iter()
                    .map(|(k, b)| format!("{}:{:?}", fmt_rational(k), b))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_default();
        TheoremCError::Classification(format!("Jordan type {{{desc}}} matches none of the normal forms I–VI"))
    })
}

/// Smallest linear rank of the foliation along the projectivised eigenspace
/// of `mu`: `rank(S - mu) - [E_mu ∩ im(S - mu) ≠ 0]`.
pub fn min_linear_rank_on_eigenspace(s: &Matrix, mu: &Rational) -> usize {
    let n = s.len();
    let a = linalg::shift(s, mu);
    let r = linalg::rank(&a);
    let kernel = linalg::kernel(&a, n);
    // columns of A span the image; E ∩ im ≠ 0 iff rank drops when stacking
    let mut stacked: Vec<Vec<Rational>> = (0..n).map(|c| a.iter().map(|row| row[c].clone()).collect()).collect();
    let k = kernel.len();
    stacked.extend(kernel);
    let joint = linalg::rank(&stacked);
    let meets = r + k > joint;
    r - usize::from(meets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn case_fields() {
        assert_eq!(case_field(&JordanCase::v()).to_string(), "(x1)*d/dx0 + (x3)*d/dx2");
        assert_eq!(case_field(&JordanCase::vi()).to_string(), "(x1)*d/dx0 + (x2)*d/dx1");
        let c = JordanCase::new(CaseTag::I, Some(int(1)), Some(int(2))).unwrap();
        assert_eq!(case_field(&c).to_string(), "(x0)*d/dx0 + (2*x1)*d/dx1");
        assert!(JordanCase::new(CaseTag::I, Some(int(1)), Some(int(1))).is_err());
        assert!(JordanCase::new(CaseTag::II, Some(int(0)), None).is_err());
    }

    #[test]
    fn roots() {
        // (t - 1/2)(t + 3) t = t^3 + 5/2 t^2 - 3/2 t
        let r = rational_roots(&[int(0), rat(-3, 2), rat(5, 2), int(1)]).unwrap();
        assert_eq!(r, vec![int(-3), int(0), rat(1, 2)]);
        assert_eq!(rational_roots(&[int(2), int(0), int(1)]).unwrap(), vec![]);
    }

    #[test]
    fn classification_recovers_each_case() {
        let cases = [
            JordanCase::new(CaseTag::I, Some(int(1)), Some(int(3))).unwrap(),
            JordanCase::new(CaseTag::II, Some(int(2)), None).unwrap(),
            JordanCase::new(CaseTag::III, Some(int(-1)), None).unwrap(),
            JordanCase::new(CaseTag::IV, Some(int(2)), Some(int(5))).unwrap(),
            JordanCase::v(),
            JordanCase::vi(),
        ];
        let p = vec![
            vec![int(1), int(2), int(0), int(1)],
            vec![int(0), int(1), int(1), int(0)],
            vec![int(1), int(0), int(1), int(3)],
            vec![int(0), int(0), int(1), int(1)],
        ];
        assert!(!linalg::det(&p).is_zero());
        for c in &cases {
            // conjugate and add a radial shift: S' = P J P^{-1} + 7 I
            let j = c.matrix();
            let inv = linalg::inverse(&p).unwrap();
            let s = linalg::shift(&linalg::mat_mul(&linalg::mat_mul(&p, &j), &inv), &int(-7));
            let m = classify(&s).unwrap();
            // shifted IV is the unshifted I with the double eigenvalue moved to 0
            let expected = if c.tag() == CaseTag::IV { CaseTag::I } else { c.tag() };
            assert_eq!(m.case.tag(), expected, "{c}");
            let shifted = linalg::shift(&s, &m.shift);
            assert_eq!(linalg::mat_mul(&shifted, &m.transform), linalg::mat_mul(&m.transform, &m.case.matrix()));
        }
    }

    #[test]
    fn unlisted_type_is_reported() {
        // nilpotent block of size 2, a zero block and a simple eigenvalue
        let mut s = vec![vec![int(0); 4]; 4];
        s[0][1] = int(1);
        s[3][3] = int(1);
        assert!(matches!(classify(&s), Err(TheoremCError::Classification(_))));
    }

    #[test]
    fn linear_rank_along_lines() {
        assert_eq!(min_linear_rank_on_eigenspace(&JordanCase::v().matrix(), &int(0)), 1);
        assert_eq!(min_linear_rank_on_eigenspace(&JordanCase::vi().matrix(), &int(0)), 1);
        let c = JordanCase::new(CaseTag::III, Some(int(1)), None).unwrap();
        assert_eq!(min_linear_rank_on_eigenspace(&c.matrix(), &int(0)), 2);
    }
}
