use syzygy::field::FieldDescriptor;
use syzygy::models::{build_by_name, hyperelliptic_curve, quadric_hypersurface, rational_normal_curve, veronese_surface};
use syzygy::projection::{random_subspace, CellStatus};
use syzygy::verify::{
    summary_csv, verify_minimal_degree, verify_prop32_prop33, verify_thm12_linearly_normal, verify_thm12_projected,
    verify_thm13_bound, Provenance, ProjectedRanges, Status, Theorem,
};

const FP: FieldDescriptor = FieldDescriptor::Prime { p: 32003 };

#[test]
fn minimal_degree_equivalence() {
    for model in [rational_normal_curve(4).unwrap(), quadric_hypersurface(2).unwrap(), veronese_surface().unwrap()] {
        let r = verify_minimal_degree(&model, FP).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.summary);
    }
    // not of minimal degree, and accordingly reg = 3
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let r = verify_minimal_degree(&quintic, FP).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.conclusions.iter().all(|c| c.provenance == Provenance::Computed));
}

#[test]
fn linearly_normal_syzygies() {
    let g2 = hyperelliptic_curve(2, 7).unwrap();
    assert_eq!(verify_thm12_linearly_normal(&g2, 2, FP).unwrap().status, Status::Pass);
    assert_eq!(verify_thm12_linearly_normal(&g2, 3, FP).unwrap().status, Status::HypothesisNotMet);
}

#[test]
fn projected_statements() {
    let sextic = build_by_name("elliptic-normal-curve", &[6], 1).unwrap();
    let (projected, _) = random_subspace(&sextic, 1, 9).unwrap();
    let r = verify_thm12_projected(&projected, FP).unwrap();
    assert_eq!(r.status, Status::Pass, "{:?}", r.conclusions);
    assert!(r.conclusions.iter().any(|c| c.name.starts_with("open cells")));
    assert_eq!(verify_thm13_bound(&projected, FP).unwrap().status, Status::Pass);

    let ln = verify_thm13_bound(&sextic, FP).unwrap();
    assert_eq!(ln.status, Status::HypothesisNotMet);
    assert_eq!(verify_thm12_projected(&veronese_surface().unwrap(), FP).unwrap().status, Status::HypothesisNotMet);
}

#[test]
fn projected_ranges_of_sextic() {
    let sextic = build_by_name("elliptic-normal-curve", &[6], 1).unwrap();
    let (projected, _) = random_subspace(&sextic, 2, 1).unwrap();
    let ranges = ProjectedRanges::of(&projected).unwrap();
    assert_eq!((ranges.e, ranges.g, ranges.t, ranges.gonality), (2, 1, 2, 2));
    assert_eq!(ranges.predicted(0, 1), CellStatus::Nonzero);
    assert_eq!(ranges.predicted(3, 1), CellStatus::Zero);
    assert_eq!(ranges.predicted(0, 2), CellStatus::Zero);
    assert_eq!(ranges.undetermined(3), vec![(2, 1), (1, 2), (2, 2)]);
}

#[test]
fn section_invariance_over_seeds() {
    let v = veronese_surface().unwrap();
    for seed in [1, 2] {
        let r = verify_prop32_prop33(&v, seed, FP).unwrap();
        assert_eq!(r.status, Status::Pass, "{:?}", r.conclusions);
    }
    let curve = verify_prop32_prop33(&rational_normal_curve(3).unwrap(), 1, FP).unwrap();
    assert_eq!(curve.status, Status::HypothesisNotMet);
    assert!(curve.conclusions.is_empty());
}

#[test]
fn report_serialization() {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let r = verify_thm12_linearly_normal(&quintic, 2, FP).unwrap();
    let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    for key in ["theorem", "model", "seed_chain", "hypotheses", "conclusions", "status"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["theorem"], "thm12ln");
    assert_eq!(r.to_json_untimed().unwrap(), verify_thm12_linearly_normal(&quintic, 2, FP).unwrap().to_json_untimed().unwrap());
    let csv = summary_csv(&[r]);
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("thm12ln,elliptic_normal_curve(5),ZZ/32003,1,pass"));
    assert_eq!(Theorem::from_tag("prop32_33").unwrap(), Theorem::CurveSectionInvariance);
}
