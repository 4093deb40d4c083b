mod common;

use foliate::extcalc::radial_field;
use foliate::geometry::{linear_rank_at, split_construct, tangent_fields, ProjFoliation1D};
use foliate::poly::int;
use proptest::prelude::*;
use rand::Rng;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn split_forms_have_additive_degree_and_tangent_generators(s in any::<u64>()) {
        let mut r = rng(s);
        let (a, b) = (r.gen_range(0..=2), r.gen_range(0..=2));
        let x = homogeneous_field(&mut r, 4, a);
        let y = homogeneous_field(&mut r, 4, b);
        let Ok(dist) = split_construct(&[x.clone(), y.clone()], 3) else { return Ok(()) };
        prop_assert_eq!(dist.degree().unwrap(), (a + b) as i64);
        let omega = dist.omega();
        for v in [&x, &y, &radial_field(4)] {
            prop_assert!(omega.contract(v).unwrap().is_zero());
        }
    }

    #[test]
    fn tangent_fields_annihilate_the_form(s in any::<u64>()) {
        let mut r = rng(s);
        let e = r.gen_range(0..=1);
        let x = homogeneous_field(&mut r, 4, e);
        let y = homogeneous_field(&mut r, 4, 1);
        let Ok(dist) = split_construct(&[x, y], 3) else { return Ok(()) };
        let tf = tangent_fields(dist.omega(), 1).unwrap();
        for v in tf.basis.iter().chain(&tf.quotient) {
            prop_assert!(dist.omega().contract(v).unwrap().is_zero());
        }
        // R and the degree-one generator are always there
        prop_assert!(tf.quotient_dim() >= 1);
    }

    #[test]
    fn chart_restriction_ignores_radial_multiples(s in any::<u64>(), chart in 0usize..3) {
        let mut r = rng(s);
        let d = r.gen_range(1..=2);
        let v = homogeneous_field(&mut r, 3, d);
        let g = homogeneous_poly(&mut r, 3, d - 1, 3);
        let w = &v + &radial_field(3).mul_poly(&g);
        prop_assert_eq!(v.chart_restrict(chart).unwrap(), w.chart_restrict(chart).unwrap());
        if let (Ok(f), Ok(h)) = (ProjFoliation1D::new(v), ProjFoliation1D::new(w)) {
            prop_assert_eq!(f.field(), h.field());
            prop_assert_eq!(f.chart_restrict(chart).unwrap(), h.chart_restrict(chart).unwrap());
        }
    }

    #[test]
    fn linear_rank_is_invariant_under_units(s in any::<u64>()) {
        let mut r = rng(s);
        let n = r.gen_range(2..=3);
        let v = singular_field(&mut r, n, 2);
        let c = nonzero_rational(&mut r);
        let u = poly_with_constant(&mut r, n, 1, c);
        prop_assume!(!v.is_zero());
        prop_assert_eq!(linear_rank_at(&v).unwrap(), linear_rank_at(&v.mul_poly(&u)).unwrap());
    }

    #[test]
    fn scaling_a_generator_keeps_the_distribution(s in any::<u64>()) {
        let mut r = rng(s);
        let x = homogeneous_field(&mut r, 4, 1);
        let y = homogeneous_field(&mut r, 4, 1);
        let c = nonzero_rational(&mut r);
        let (Ok(a), Ok(b)) = (split_construct(&[x.clone(), y.clone()], 3), split_construct(&[x.scale(&c), y], 3)) else {
            return Ok(());
        };
        prop_assert_eq!(a.omega().scale(&c), b.omega().clone());
        prop_assert_eq!(a.omega().ratio_to(b.omega()).map(|q| q * &c), Some(int(1)));
    }
}
