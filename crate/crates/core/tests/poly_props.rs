mod common;

use foliate::parse::{parse_field, parse_form, parse_poly};
use foliate::poly::{content_gcd, Poly};
use proptest::prelude::*;

use common::*;

fn arb_poly(nvars: usize) -> impl Strategy<Value = Poly> {
    any::<u64>().prop_map(move |s| poly(&mut rng(s), nvars, 3, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(a in arb_poly(3), b in arb_poly(3), i in 0usize..3) {
        let lhs = (&a * &b).partial_derivative(i).unwrap();
        let rhs = &(&a * &b.partial_derivative(i).unwrap()) + &(&b * &a.partial_derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogeneous_components_sum_back(a in arb_poly(4)) {
        let top = a.total_degree().unwrap_or(0);
        let sum = (0..=top).fold(Poly::zero(4), |acc, d| &acc + &a.homogeneous_component(d));
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn gcd_divides_inputs(a in arb_poly(3), b in arb_poly(3), f in arb_poly(3)) {
        prop_assume!(!f.is_zero() && !a.is_zero() && !b.is_zero());
        let (fa, fb) = (&f * &a, &f * &b);
        let g = content_gcd(&[fa.clone(), fb.clone()]).unwrap();
        prop_assert!(fa.div_exact(&g).is_some());
        prop_assert!(fb.div_exact(&g).is_some());
        // the planted factor divides the gcd
        prop_assert!(g.div_exact(&f.monic()).is_some());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in arb_poly(3), b in arb_poly(3), s in any::<u64>()) {
        let mut r = rng(s);
        let pt = vec![rational(&mut r), rational(&mut r), rational(&mut r)];
        let ev = |p: &Poly| p.evaluate(&pt).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
    }

    #[test]
    fn dehomogenize_then_homogenize(s in any::<u64>(), chart in 0usize..3) {
        let p = homogeneous_poly(&mut rng(s), 3, 3, 4);
        prop_assume!(!p.is_zero());
        let back = p.dehomogenize(chart).unwrap().homogenize(chart, 3).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn print_parse_round_trip(s in any::<u64>()) {
        let mut r = rng(s);
        let p = poly(&mut r, 4, 3, 5);
        prop_assert_eq!(parse_poly(&p.to_string(), Some(4)).unwrap(), p);
        let w = form(&mut r, 2, 4, 2);
        prop_assert_eq!(parse_form(&w.to_string(), Some(4)).unwrap(), w);
        let x = field(&mut r, 4, 2);
        prop_assert_eq!(parse_field(&x.to_string(), Some(4)).unwrap(), x);
    }
}
