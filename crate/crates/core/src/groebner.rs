//! Buchberger's algorithm under degrevlex, with ideal membership, radical
//! membership, dimension and variety containment built on top.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Monomial, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
}

/// Ideal given by generators; zero generators are dropped, so an empty list
/// is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(nvars: usize, gens: Vec<Poly>) -> Result<Ideal, IdealError> {
        for g in &gens {
            if g.nvars() != nvars {
                return Err(IdealError::NvarsMismatch { left: nvars, right: g.nvars() });
            }
        }
        Ok(Ideal { nvars, gens: gens.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn zero(nvars: usize) -> Ideal {
        Ideal { nvars, gens: Vec::new() }
    }

    pub fn unit(nvars: usize) -> Ideal {
        Ideal { nvars, gens: vec![Poly::one(nvars)] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// `I + J`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        if self.nvars != other.nvars {
            return Err(IdealError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Ideal { nvars: self.nvars, gens })
    }

    pub fn with_generator(&self, p: Poly) -> Ideal {
        assert_eq!(p.nvars(), self.nvars, "variable count mismatch");
        let mut gens = self.gens.clone();
        if !p.is_zero() {
            gens.push(p);
        }
        Ideal { nvars: self.nvars, gens }
    }

    pub fn groebner(&self) -> GroebnerBasis {
        buchberger(self)
    }

    pub fn contains(&self, p: &Poly) -> Result<bool, IdealError> {
        ideal_membership(p, self)
    }

    pub fn dimension(&self) -> i64 {
        dimension(self)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Poly::is_homogeneous)
    }

    /// Codimension in projective space of the zero set of a homogeneous
    /// ideal: `nvars - dim(affine cone)`. An empty projective set (cone at
    /// most the origin) gets codimension `nvars`.
    pub fn projective_codim(&self) -> i64 {
        let d = self.dimension().max(0);
        self.nvars as i64 - d
    }

    /// Dimension of the projective zero set, `-1` when empty.
    pub fn projective_dimension(&self) -> i64 {
        self.dimension().max(0) - 1
    }
}

/// Reduced Gröbner basis with respect to degrevlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    basis: Vec<Poly>,
    source: Ideal,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn source(&self) -> &Ideal {
        &self.source
    }

    pub fn nvars(&self) -> usize {
        self.source.nvars
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.leading_monomial().expect("nonzero").clone()).collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly, IdealError> {
        if p.nvars() != self.nvars() {
            return Err(IdealError::NvarsMismatch { left: self.nvars(), right: p.nvars() });
        }
        Ok(reduce(p, &self.basis))
    }

    /// Checks Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                if !reduce(&s_polynomial(&self.basis[i], &self.basis[j]), &self.basis).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn lm(p: &Poly) -> &Monomial {
    p.leading_monomial().expect("nonzero polynomial")
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_monomial(&fm.quotient_of(&l), &fc.recip());
    let b = g.mul_monomial(&gm.quotient_of(&l), &gc.recip());
    a - b
}

/// Full reduction of `p` by `basis`.
fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let n = p.nvars();
    let mut rest = p.clone();
    let mut rem: Vec<(Monomial, Rational)> = Vec::new();
    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| lm(g).divides(&m)) {
            Some(g) => {
                let (gm, gc) = g.leading_term().expect("nonzero");
                let q = gm.quotient_of(&m);
                rest -= &g.mul_monomial(&q, &(&c / gc));
            }
            None => {
                rest -= &Poly::monomial(m.clone(), c.clone());
                rem.push((m, c));
            }
        }
    }
    Poly::from_terms(n, rem)
}

/// Reduced Gröbner basis by Buchberger's algorithm (normal selection, with
/// the coprime and chain criteria).
pub fn buchberger(ideal: &Ideal) -> GroebnerBasis {
    let mut g: Vec<Poly> = Vec::new();
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let add = |g: &mut Vec<Poly>, pairs: &mut BTreeSet<(Monomial, usize, usize)>, h: Poly| {
        let h = h.monic();
        let k = g.len();
        for (i, gi) in g.iter().enumerate() {
            pairs.insert((lm(gi).lcm(lm(&h)), i, k));
        }
        g.push(h);
    };
    for f in &ideal.gens {
        let r = reduce(f, &g);
        if !r.is_zero() {
            add(&mut g, &mut pairs, r);
        }
    }
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    while let Some(pair) = pairs.pop_first() {
        let (l, i, j) = pair;
        done.insert((i, j));
        if g[i].is_constant() || g[j].is_constant() {
            break;
        }
        if lm(&g[i]).is_coprime(lm(&g[j])) {
            continue;
        }
        let pending = |a: usize, b: usize, done: &BTreeSet<(usize, usize)>| {
            let key = (a.min(b), a.max(b));
            !done.contains(&key)
        };
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && lm(&g[k]).divides(&l)
                && !pending(i, k, &done)
                && !pending(j, k, &done)
        });
        if chain {
            continue;
        }
        let r = reduce(&s_polynomial(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let constant = r.is_constant();
            add(&mut g, &mut pairs, r);
            if constant {
                break;
            }
        }
    }
    GroebnerBasis { basis: interreduce(g, ideal.nvars), source: ideal.clone() }
}

fn interreduce(g: Vec<Poly>, nvars: usize) -> Vec<Poly> {
    if g.iter().any(Poly::is_constant) {
        return vec![Poly::one(nvars)];
    }
    // minimal basis: drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && lm(q).divides(lm(p)) && (lm(q) != lm(p) || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out: Vec<Poly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        let (m, c) = minimal[i].leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let tail = &minimal[i] - &Poly::monomial(m.clone(), c.clone());
        out.push((Poly::monomial(m, c) + reduce(&tail, &others)).monic());
    }
    out.sort_by(|a, b| lm(a).cmp(lm(b)));
    out
}

pub fn normal_form(p: &Poly, g: &GroebnerBasis) -> Result<Poly, IdealError> {
    g.normal_form(p)
}

pub fn ideal_membership(p: &Poly, ideal: &Ideal) -> Result<bool, IdealError> {
    Ok(buchberger(ideal).normal_form(p)?.is_zero())
}

/// Whether `p` vanishes on the zero set of `ideal`, via `1 ∈ I + <1 - t p>`.
pub fn radical_membership(p: &Poly, ideal: &Ideal) -> Result<bool, IdealError> {
    let n = ideal.nvars;
    if p.nvars() != n {
        return Err(IdealError::NvarsMismatch { left: n, right: p.nvars() });
    }
    if p.is_zero() {
        return Ok(true);
    }
    let mut gens: Vec<Poly> = ideal.gens.iter().map(|g| g.extend_vars(n + 1)).collect();
    let t = Poly::var(n, n + 1);
    gens.push(Poly::one(n + 1) - &t * &p.extend_vars(n + 1));
    Ok(buchberger(&Ideal { nvars: n + 1, gens }).is_unit())
}

/// Affine dimension of the zero set; `-1` if empty, `nvars` for the zero ideal.
pub fn dimension(ideal: &Ideal) -> i64 {
    let g = buchberger(ideal);
    if g.is_unit() {
        return -1;
    }
    dimension_from_leading(&g.leading_monomials(), ideal.nvars)
}

/// Largest `|S|` such that no leading monomial is supported inside `S`.
pub fn dimension_from_leading(leading: &[Monomial], nvars: usize) -> i64 {
    let masks: Vec<u64> =
        leading.iter().map(|m| m.support().fold(0u64, |acc, i| acc | 1 << i)).collect();
    let mut best = 0;
    for s in 0u64..(1u64 << nvars) {
        let size = s.count_ones();
        if size > best && masks.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    best as i64
}

/// `V(I) ⊆ V(J)`: every generator of `J` lies in the radical of `I`.
pub fn variety_containment(i: &Ideal, j: &Ideal) -> Result<bool, IdealError> {
    if i.nvars != j.nvars {
        return Err(IdealError::NvarsMismatch { left: i.nvars, right: j.nvars });
    }
    for g in &j.gens {
        if !radical_membership(g, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Zero for Ideal {
    fn zero() -> Self {
        Ideal::zero(0)
    }
    fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }
}

impl std::ops::Add for Ideal {
    type Output = Ideal;
    fn add(self, rhs: Ideal) -> Ideal {
        self.sum(&rhs).expect("variable count mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ideal(gens: &[&str], n: usize) -> Ideal {
        Ideal::new(n, gens.iter().map(|s| parse_poly(s, Some(n)).unwrap()).collect()).unwrap()
    }

    #[test]
    fn basic_bases() {
        let g = ideal(&["x0", "x1"], 4).groebner();
        assert_eq!(g.basis().len(), 2);
        assert!(Ideal::zero(3).groebner().basis().is_empty());
        // x1 = x1*x0^2 - (x0 + 1)*x1*(x0 - 1) ... hand elimination: x1 ∈ <x0^2, x0 x1 - x1>
        let i = ideal(&["x0^2", "x0*x1 - x1"], 2);
        let g = i.groebner();
        assert!(g.basis().contains(&parse_poly("x1", Some(2)).unwrap()));
        assert!(g.satisfies_buchberger_criterion());
    }

    #[test]
    fn membership_and_normal_forms() {
        let i = ideal(&["x0"], 2);
        let g = i.groebner();
        assert!(g.normal_form(&parse_poly("x0^2", Some(2)).unwrap()).unwrap().is_zero());
        assert_eq!(g.normal_form(&parse_poly("x1", Some(2)).unwrap()).unwrap(), parse_poly("x1", Some(2)).unwrap());
        let j = ideal(&["x0 + x1"], 2);
        assert!(j.contains(&parse_poly("x0*x1 + x1^2", Some(2)).unwrap()).unwrap());
    }

    #[test]
    fn radical_membership_examples() {
        let i = ideal(&["x0^2"], 2);
        assert!(radical_membership(&parse_poly("x0", Some(2)).unwrap(), &i).unwrap());
        assert!(!radical_membership(&parse_poly("x1", Some(2)).unwrap(), &i).unwrap());
        let j = ideal(&["x0^2", "x1^2"], 2);
        assert!(radical_membership(&parse_poly("x0 + x1", Some(2)).unwrap(), &j).unwrap());
    }

    #[test]
    fn dimensions() {
        assert_eq!(ideal(&["x0", "x1"], 4).dimension(), 2);
        assert_eq!(ideal(&["1"], 4).dimension(), -1);
        assert_eq!(Ideal::zero(3).dimension(), 3);
        assert_eq!(ideal(&["x0*x1"], 3).dimension(), 2);
        assert_eq!(ideal(&["x0 - 1", "x0*x1"], 2).dimension(), 0);
    }

    #[test]
    fn containment() {
        assert!(variety_containment(&ideal(&["x0"], 2), &ideal(&["x0^2"], 2)).unwrap());
        assert!(!variety_containment(&ideal(&["x0"], 2), &ideal(&["x1"], 2)).unwrap());
    }
}
