//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use foliate::extcalc::{IndexSet, KForm, PolyVectorField};
use foliate::poly::{Monomial, Poly, Rational};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng as TestRng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

/// Small nonzero-biased rationals: integers in `[-5, 5]`, sometimes halves or thirds.
pub fn rational(rng: &mut TestRng) -> Rational {
    let n = rng.gen_range(-5i64..=5);
    let d = [1i64, 1, 1, 2, 3][rng.gen_range(0..5)];
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational(rng: &mut TestRng) -> Rational {
    loop {
        let q = rational(rng);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Up to `terms` random monomials of degree `≤ max_deg`.
pub fn poly(rng: &mut TestRng, nvars: usize, max_deg: u32, terms: usize) -> Poly {
    let monos = Monomial::all_up_to_degree(nvars, max_deg);
    Poly::from_terms(nvars, (0..terms).map(|_| (monos[rng.gen_range(0..monos.len())].clone(), rational(rng))))
}

pub fn homogeneous_poly(rng: &mut TestRng, nvars: usize, deg: u32, terms: usize) -> Poly {
    let monos = Monomial::all_of_degree(nvars, deg);
    Poly::from_terms(nvars, (0..terms).map(|_| (monos[rng.gen_range(0..monos.len())].clone(), rational(rng))))
}

/// A polynomial with prescribed value at the origin.
pub fn poly_with_constant(rng: &mut TestRng, nvars: usize, max_deg: u32, c: Rational) -> Poly {
    let p = poly(rng, nvars, max_deg, 3);
    &(&p - &Poly::constant(p.constant_term(), nvars)) + &Poly::constant(c, nvars)
}

pub fn field(rng: &mut TestRng, nvars: usize, max_deg: u32) -> PolyVectorField {
    PolyVectorField::new((0..nvars).map(|_| poly(rng, nvars, max_deg, 3)).collect()).unwrap()
}

pub fn homogeneous_field(rng: &mut TestRng, nvars: usize, deg: u32) -> PolyVectorField {
    PolyVectorField::new((0..nvars).map(|_| homogeneous_poly(rng, nvars, deg, 2)).collect()).unwrap()
}

/// A field vanishing at the origin.
pub fn singular_field(rng: &mut TestRng, nvars: usize, max_deg: u32) -> PolyVectorField {
    let x = field(rng, nvars, max_deg);
    x.map(|c| c - &Poly::constant(c.constant_term(), nvars))
}

pub fn form(rng: &mut TestRng, degree: usize, nvars: usize, max_deg: u32) -> KForm {
    let sets = IndexSet::all_of_size(nvars, degree);
    let picks: Vec<(Vec<usize>, Poly)> = (0..3)
        .map(|_| (sets[rng.gen_range(0..sets.len())].indices().collect(), poly(rng, nvars, max_deg, 2)))
        .collect();
    KForm::from_terms(degree, nvars, picks).unwrap()
}
