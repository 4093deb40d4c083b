mod common;

use foliate::extcalc::IndexSet;
use foliate::geometry::split_type;
use foliate::poly::{int, Poly, Rational};
use foliate::theoremc::{
    case_field, case_v_family, case_vi_family, combined_constraint, deduce_zeros, integrability_report,
    kernel_system, CaseTag, DeductionGraph, JordanCase,
};
use num_traits::Zero;
use rand::Rng;

use common::*;

fn nilpotent_cases() -> [JordanCase; 2] {
    [JordanCase::v(), JordanCase::vi()]
}

#[test]
fn deduced_zeros_vanish_on_the_full_kernel() {
    for case in nilpotent_cases() {
        let v = case_field(&case);
        for d in 2..=5 {
            let zeros = deduce_zeros(&DeductionGraph::new(&v, d));
            assert!(!zeros.is_empty(), "case {case}, d={d}: nothing deduced");
            let ks = kernel_system(&v, d, true);
            for omega in &ks.basis {
                for eta in &zeros {
                    assert!(eta.coefficient_in(omega).is_zero(), "case {case}, d={d}: {eta:?} survives");
                }
            }
        }
    }
}

#[test]
fn kernel_members_satisfy_every_imposed_identity() {
    let mut r = rng(31);
    for case in nilpotent_cases() {
        let v = case_field(&case);
        for d in 1..=3 {
            let ks = kernel_system(&v, d, true);
            let coeffs: Vec<Rational> = (0..ks.dim()).map(|_| rational(&mut r)).collect();
            let omega = ks.combination(&coeffs);
            assert!(omega.contract(&foliate::extcalc::radial_field(4)).unwrap().is_zero());
            assert!(omega.contract(&v).unwrap().is_zero());
            assert!(omega.lie_derivative(&v).unwrap().is_zero());
            assert!(ks.contains(&omega));
        }
    }
}

#[test]
fn displayed_families_span_the_degree_one_kernels() {
    let unit = |i: usize| -> [Rational; 4] { std::array::from_fn(|j| int((i == j) as i64)) };
    for (case, family) in [
        (JordanCase::v(), case_v_family as fn(&Rational, &Rational, &Rational, &Rational) -> _),
        (JordanCase::vi(), case_vi_family),
    ] {
        let ks = kernel_system(&case_field(&case), 1, true);
        assert_eq!(ks.dim(), 4, "case {case}");
        for i in 0..4 {
            let [a, b, c, e] = unit(i);
            assert!(ks.contains(&family(&a, &b, &c, &e)));
        }
    }
}

#[test]
fn combined_constraints_hold_for_diagonalizable_and_block_cases() {
    let mut r = rng(47);
    for trial in 0..18 {
        let tag = [CaseTag::I, CaseTag::II, CaseTag::III][trial % 3];
        let a = int(r.gen_range(1..=5));
        let b = loop {
            let b = int(r.gen_range(-5..=5));
            if !b.is_zero() && b != a {
                break b;
            }
        };
        let case = match tag {
            CaseTag::I => JordanCase::new(tag, Some(a), Some(b)),
            _ => JordanCase::new(tag, Some(a), None),
        };
        let Ok(case) = case else { continue };
        let v = case_field(&case);
        for d in 1..=2 {
            for omega in &kernel_system(&v, d, true).basis {
                let bb = combined_constraint(&case, omega);
                assert!(bb.is_some(), "case {case}, d={d}: constraint fails on {omega}");
                let bb = bb.unwrap();
                let x1 = Poly::var(1, 4);
                assert_eq!(omega.coefficient(&IndexSet::singleton(0)), &x1 * &bb);
            }
        }
    }
}

// L_v preserves the kernel of i_R, i_v and acts nilpotently on it, so
// L_v Ω = λ Ω forces λ = 0.
#[test]
fn nilpotent_fields_act_nilpotently_on_the_tangent_kernel() {
    for case in nilpotent_cases() {
        let v = case_field(&case);
        for d in 0..=3 {
            let ks = kernel_system(&v, d, false);
            for omega in &ks.basis {
                let mut w = omega.clone();
                for _ in 0..=ks.dim() {
                    w = w.lie_derivative(&v).unwrap();
                    assert!(ks.contains(&w), "case {case}, d={d}: L_v leaves the kernel");
                }
                assert!(w.is_zero(), "case {case}, d={d}: L_v is not nilpotent on {omega}");
            }
        }
    }
}

// without the Lie condition the kernel is strictly larger: invariance is not automatic
#[test]
fn tangency_alone_does_not_force_lie_invariance() {
    let v = case_field(&JordanCase::v());
    let ks = kernel_system(&v, 1, false);
    assert!(ks.dim() > kernel_system(&v, 1, true).dim());
    assert!(ks.basis.iter().any(|w| !w.lie_derivative(&v).unwrap().is_zero()));
}

#[test]
fn degree_one_integrability_in_the_parameters() {
    for case in nilpotent_cases() {
        let ks = kernel_system(&case_field(&case), 1, true);
        let report = integrability_report(&ks);
        assert!(report.always_integrable(), "case {case}: {}", serde_json::to_string(&report).unwrap());
        assert_eq!(report.integrable_dim, 4);
    }
}

#[test]
fn split_type_arithmetic() {
    for d in 0..6 {
        for e in 0..=d {
            let (a, b) = split_type(d, e);
            assert_eq!(a + b, 2 - d);
            assert_eq!(a, 1 - e);
        }
    }
    assert_eq!(split_type(3, 0), (1, -2));
}
