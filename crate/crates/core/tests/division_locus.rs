use foliate::division::{
    division_locus_sample, theorem_b_decide, ComponentSample, DivisionError, GeneratorSource, Outcome,
};
use foliate::geometry::{split_construct, ProjFoliation1D};
use foliate::groebner::Ideal;
use foliate::parse::{parse_field, parse_poly};
use foliate::poly::{int, Rational};
use foliate::theoremc::{case_field, case_vi_family, theorem_c_pipeline, JordanCase};

fn field(s: &str) -> foliate::extcalc::PolyVectorField {
    parse_field(s, Some(4)).unwrap()
}

fn ideal(gens: &[&str]) -> Ideal {
    Ideal::new(4, gens.iter().map(|g| parse_poly(g, Some(4)).unwrap()).collect()).unwrap()
}

fn point(cs: [i64; 4]) -> Vec<Rational> {
    cs.into_iter().map(int).collect()
}

fn unit_points() -> Vec<Vec<Rational>> {
    (0..4).map(|i| point(std::array::from_fn(|j| (i == j) as i64))).collect()
}

// G diagonal with distinct eigenvalues (isolated singular points at the
// coordinate points), D = i_X i_Y i_R vol with X the field of G
fn diagonal_split() -> (foliate::geometry::ProjDistribution, Vec<foliate::extcalc::PolyVectorField>, ProjFoliation1D) {
    let x = field("x0*d/dx0 + 2*x1*d/dx1 + 3*x2*d/dx2");
    let y = field("d/dx0 + d/dx1 + d/dx2 + d/dx3");
    let d = split_construct(&[x.clone(), y.clone()], 3).unwrap();
    (d, vec![x.clone(), y], ProjFoliation1D::new(x).unwrap())
}

#[test]
fn factor_foliation_divides_at_its_singular_points() {
    let (d, fields, g) = diagonal_split();
    let verdicts = division_locus_sample(&d, &GeneratorSource::Split(fields), &g, &unit_points()).unwrap();
    assert_eq!(verdicts.len(), 4);
    for v in &verdicts {
        assert!(v.certificate.divides(), "{v:?}");
    }
}

#[test]
fn vanishing_decomposition_functions_fail() {
    // on x0 = 1: X = z1 Y1 + z2 Y2 with Y1 = d/dz1 + z3 d/dz2, Y2 = d/dz2 + z1 d/dz3
    let y1 = field("x0*d/dx1 + x3*d/dx2");
    let y2 = field("x0*d/dx2 + x1*d/dx3");
    let v = field("x0*x1*d/dx1 + (x1*x3 + x0*x2)*d/dx2 + x1*x2*d/dx3");
    let d = split_construct(&[y1.clone(), y2.clone()], 3).unwrap();
    let g = ProjFoliation1D::new(v).unwrap();
    let verdicts = division_locus_sample(&d, &GeneratorSource::Split(vec![y1, y2]), &g, &[point([1, 0, 0, 0])]).unwrap();
    match &verdicts[0].certificate.outcome {
        Outcome::Fails { values_at_basepoint } => assert_eq!(values_at_basepoint, &["0", "0"]),
        other => panic!("expected FAILS, got {other:?}"),
    }
}

#[test]
fn sample_points_must_be_singular() {
    let (d, fields, g) = diagonal_split();
    let err = division_locus_sample(&d, &GeneratorSource::Split(fields), &g, &[point([1, 1, 0, 0])]).unwrap_err();
    assert_eq!(err, DivisionError::NotSingular);
}

#[test]
fn split_distribution_with_its_factor_splits() {
    let (d, _, g) = diagonal_split();
    let comps: Vec<ComponentSample> = unit_points()
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let others: Vec<String> = (0..4).filter(|&j| j != i).map(|j| format!("x{j}")).collect();
            ComponentSample { ideal: ideal(&others.iter().map(String::as_str).collect::<Vec<_>>()), point: p }
        })
        .collect();
    let report = theorem_b_decide(&d, &g, &comps).unwrap();
    assert!(report.tangent && report.rank_at_least_2);
    assert!(report.cond1_all_components_meet && report.cond3_containment && report.consistent);
    assert!(report.not_free_at.is_empty());
    assert_eq!(report.split_type, Some((0, 1)));
}

#[test]
fn singular_line_not_contained_in_sing_d_is_flagged() {
    let v = case_field(&JordanCase::vi());
    let omega = case_vi_family(&int(1), &int(1), &int(2), &int(0));
    let pipeline = theorem_c_pipeline(&v, 1, Some(&omega)).unwrap();
    assert!(!pipeline.not_free_at.is_empty());
    let d = foliate::geometry::ProjDistribution::codim_one(omega).unwrap();
    let g = ProjFoliation1D::new(v).unwrap();
    // sing(v) is the line x1 = x2 = 0; sample it at the flagged points
    let comps: Vec<ComponentSample> = pipeline
        .not_free_at
        .iter()
        .map(|p| ComponentSample {
            ideal: ideal(&["x1", "x2"]),
            point: p.iter().map(|c| c.parse().unwrap()).collect(),
        })
        .collect();
    let report = theorem_b_decide(&d, &g, &comps).unwrap();
    assert_eq!(report.not_free_at, pipeline.not_free_at);
    assert!(!report.cond3_containment);
    assert_eq!(report.split_type, None);
}

#[test]
fn non_tangent_foliations_are_rejected() {
    let (d, _, _) = diagonal_split();
    let g = ProjFoliation1D::new(field("x1*d/dx0 + x3*d/dx2")).unwrap();
    assert_eq!(theorem_b_decide(&d, &g, &[]).unwrap_err(), DivisionError::NonTangent);
}
