//! Coefficient bookkeeping for homogeneous 1-forms on `C^4` and the
//! zero-propagation argument driven by `L_v Ω = 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::extcalc::{IndexSet, KForm, PolyVectorField};
use crate::poly::{Monomial, Poly, Rational};

/// The basis element `x^I dx_m` of homogeneous 1-forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffBasisElement {
    pub exps: [u32; 4],
    pub m: usize,
}

impl CoeffBasisElement {
    pub fn new(exps: [u32; 4], m: usize) -> Self {
        assert!(m < 4, "dx index out of range");
        CoeffBasisElement { exps, m }
    }

    /// `None` when some exponent is negative: the element does not exist.
    pub fn from_signed(exps: [i64; 4], m: usize) -> Option<Self> {
        let mut out = [0u32; 4];
        for (o, e) in out.iter_mut().zip(exps) {
            *o = u32::try_from(e).ok()?;
        }
        Some(Self::new(out, m))
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.exps.to_vec())
    }

    pub fn form(&self) -> KForm {
        KForm::basis(IndexSet::singleton(self.m), Poly::monomial(self.monomial(), Rational::one()), 4)
    }

    /// The coefficient `a(I; m)` of `Ω`.
    pub fn coefficient_in(&self, omega: &KForm) -> Rational {
        omega.coefficient_of(&IndexSet::singleton(self.m), &self.monomial())
    }
}

impl fmt::Display for CoeffBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.exps;
        write!(f, "a({i},{j},{k},{l};{})", self.m)
    }
}

impl Serialize for CoeffBasisElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All `x^I dx_m` with `|I| = d + 1`, grouped by `m`, monomials in degrevlex order.
pub fn coeff_basis(d: u32) -> Vec<CoeffBasisElement> {
    let monos = Monomial::all_of_degree(4, d + 1);
    (0..4)
        .flat_map(|m| {
            monos.iter().map(move |mono| {
                let e = mono.exponents();
                CoeffBasisElement::new([e[0], e[1], e[2], e[3]], m)
            })
        })
        .collect()
}

/// Edge `η → ξ` with weight the coefficient of `ξ` in `L_v η`.
#[derive(Clone, Debug, Default)]
pub struct DeductionGraph {
    nodes: Vec<CoeffBasisElement>,
    index: BTreeMap<CoeffBasisElement, usize>,
    edges: BTreeMap<(usize, usize), Rational>,
    preds: Vec<Vec<usize>>,
}

impl DeductionGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(v: &PolyVectorField, d: u32) -> Self {
        let nodes = coeff_basis(d);
        let index: BTreeMap<_, _> = nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let mut edges = BTreeMap::new();
        let mut preds = vec![Vec::new(); nodes.len()];
        for (i, eta) in nodes.iter().enumerate() {
            let image = eta.form().lie_derivative(v).expect("4 variables");
            for (set, poly) in image.terms() {
                let m = set.indices().next().expect("1-form");
                for (mono, c) in poly.terms() {
                    let e = mono.exponents();
                    let xi = CoeffBasisElement::new([e[0], e[1], e[2], e[3]], m);
                    let j = index[&xi];
                    edges.insert((i, j), c.clone());
                    preds[j].push(i);
                }
            }
        }
        DeductionGraph { nodes, index, edges, preds }
    }

    pub fn nodes(&self) -> &[CoeffBasisElement] {
        &self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, from: &CoeffBasisElement, to: &CoeffBasisElement) -> Option<&Rational> {
        let (i, j) = (self.index.get(from)?, self.index.get(to)?);
        self.edges.get(&(*i, *j))
    }

    pub fn has_edge(&self, from: &CoeffBasisElement, to: &CoeffBasisElement) -> bool {
        self.weight(from, to).is_some()
    }

    /// `D(η)`: elements appearing in `L_v η`.
    pub fn successors(&self, eta: &CoeffBasisElement) -> Vec<CoeffBasisElement> {
        let Some(&i) = self.index.get(eta) else {
            return Vec::new();
        };
        self.edges.range((i, 0)..(i + 1, 0)).map(|((_, j), _)| self.nodes[*j].clone()).collect()
    }

    /// `O(ξ)`: elements whose Lie derivative contains `ξ`.
    pub fn predecessors(&self, xi: &CoeffBasisElement) -> Vec<CoeffBasisElement> {
        self.index.get(xi).map_or_else(Vec::new, |&j| self.preds[j].iter().map(|&i| self.nodes[i].clone()).collect())
    }

    /// Fixed point of: if all but one element of `O(ξ)` are known zero, so
    /// is the remaining one (the coefficient of `ξ` in `L_v Ω` is a single
    /// nonzero multiple of it).
    pub fn deduce_zeros(&self) -> BTreeSet<CoeffBasisElement> {
        let mut zero = vec![false; self.nodes.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for preds in &self.preds {
                let mut alive = preds.iter().filter(|&&i| !zero[i]);
                if let (Some(&only), None) = (alive.next(), alive.next()) {
                    zero[only] = true;
                    changed = true;
                }
            }
        }
        self.nodes.iter().zip(&zero).filter(|(_, z)| **z).map(|(n, _)| n.clone()).collect()
    }
}

/// Free function form of [`DeductionGraph::deduce_zeros`].
pub fn deduce_zeros(g: &DeductionGraph) -> BTreeSet<CoeffBasisElement> {
    g.deduce_zeros()
}

/// An edge between two basis elements given by signed exponents, possibly
/// nonexistent for small `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEdge {
    pub from: Option<CoeffBasisElement>,
    pub to: Option<CoeffBasisElement>,
}

impl ChainEdge {
    fn new(from: ([i64; 4], usize), to: ([i64; 4], usize)) -> Self {
        ChainEdge {
            from: CoeffBasisElement::from_signed(from.0, from.1),
            to: CoeffBasisElement::from_signed(to.0, to.1),
        }
    }

    pub fn present_in(&self, g: &DeductionGraph) -> bool {
        match (&self.from, &self.to) {
            (Some(a), Some(b)) => g.has_edge(a, b),
            _ => false,
        }
    }
}

/// The chain proving `a(d+1,0,0,0;1) = 0` for the field of case V.
pub fn pure_power_chain(d: u32) -> Vec<ChainEdge> {
    let d = i64::from(d);
    let a = ([d + 1, 0, 0, 0], 1);
    let b = ([d, 1, 0, 0], 1);
    let c = ([d, 1, 0, 0], 0);
    let e = ([d - 1, 2, 0, 0], 0);
    vec![ChainEdge::new(a, b), ChainEdge::new(c, b), ChainEdge::new(c, e)]
}

/// The chain proving `a(d,0,0,1;3) = 0` for the field of case V; the last
/// edge exists only for `d ≥ 3`.
pub fn mixed_x3_chain(d: u32) -> Vec<ChainEdge> {
    let d = i64::from(d);
    let a = ([d, 0, 0, 1], 3);
    let b = ([d - 1, 1, 0, 1], 3);
    let c = ([d - 1, 1, 1, 0], 3);
    let dd = ([d - 1, 1, 0, 1], 2);
    let e = ([d - 2, 2, 1, 0], 3);
    let f = ([d - 2, 2, 0, 1], 2);
    let g = ([d - 2, 2, 1, 0], 2);
    let h = ([d - 3, 3, 1, 0], 2);
    vec![
        ChainEdge::new(a, b),
        ChainEdge::new(c, b),
        ChainEdge::new(dd, b),
        ChainEdge::new(c, e),
        ChainEdge::new(dd, f),
        ChainEdge::new(g, e),
        ChainEdge::new(g, f),
        ChainEdge::new(g, h),
    ]
}

/// Index of the `d ≥ 3`-gated edge in [`mixed_x3_chain`].
pub const MIXED_X3_GATED_EDGE: usize = 7;

/// The closed form of `L_v(x^I dx_m)` for the case V field
/// `x1 ∂0 + x3 ∂2`:
/// `(i x^{I-e0+e1} + k x^{I-e2+e3}) dx_m`, plus `x^I dx_{m+1}` when `m ∈ {0, 2}`.
pub fn case_v_lie_closed_form(eta: &CoeffBasisElement) -> KForm {
    let [i, j, k, l] = eta.exps.map(i64::from);
    let term = |c: i64, e: [i64; 4], m: usize| match CoeffBasisElement::from_signed(e, m) {
        Some(x) if c != 0 => x.form().scale(&Rational::from_integer(c.into())),
        _ => KForm::zero(1, 4),
    };
    let mut out = &term(i, [i - 1, j + 1, k, l], eta.m) + &term(k, [i, j, k - 1, l + 1], eta.m);
    if eta.m == 0 || eta.m == 2 {
        out = &out + &term(1, [i, j, k, l], eta.m + 1);
    }
    out
}

/// Whether every element of a set vanishes on a form.
pub fn all_vanish(set: &[CoeffBasisElement], omega: &KForm) -> bool {
    set.iter().all(|e| e.coefficient_in(omega).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theoremc::jordan::{case_field, JordanCase};

    #[test]
    fn basis_size() {
        assert_eq!(coeff_basis(1).len(), 4 * 10);
        assert_eq!(coeff_basis(3).len(), 4 * 35);
    }

    #[test]
    fn deduction_chains_and_zeros() {
        let v = case_field(&JordanCase::v());
        for d in 3..=4 {
            let g = DeductionGraph::new(&v, d);
            assert!(pure_power_chain(d).iter().all(|e| e.present_in(&g)));
            assert!(mixed_x3_chain(d).iter().all(|e| e.present_in(&g)));
            let z = g.deduce_zeros();
            assert!(z.contains(&CoeffBasisElement::new([d + 1, 0, 0, 0], 1)));
            assert!(z.contains(&CoeffBasisElement::new([d, 0, 0, 1], 3)));
        }
        let g = DeductionGraph::new(&v, 2);
        let chain = mixed_x3_chain(2);
        assert!(!chain[MIXED_X3_GATED_EDGE].present_in(&g));
        assert!(chain[..MIXED_X3_GATED_EDGE].iter().all(|e| e.present_in(&g)));
        assert!(DeductionGraph::empty().deduce_zeros().is_empty());
    }

    #[test]
    fn closed_form_matches_lie_derivative() {
        let v = case_field(&JordanCase::v());
        for eta in coeff_basis(2) {
            assert_eq!(eta.form().lie_derivative(&v).unwrap(), case_v_lie_closed_form(&eta), "{eta}");
        }
    }
}
