use syzygy::models::{
    build_by_name, catalog, curve_section, elliptic_normal_curve_seeded, hyperelliptic_curve, invariants, scroll,
    veronese_surface, CaseTag, Construction, EmbeddedModel,
};
use syzygy::projection::random_subspace;
use syzygy::Error;

#[test]
fn catalog_invariants_match() {
    for entry in catalog() {
        let model = entry.build().unwrap_or_else(|e| panic!("{}: {e}", entry.constructor));
        let md = invariants(&model).unwrap();
        assert_eq!((md.n, md.d, md.e, md.g), entry.expected, "{}", model.name());
        assert!(model.groebner().s_pairs_reduce_to_zero(), "{}", model.name());
        assert_eq!(model.hilbert_function(1), model.nvars() as u64, "{} is degenerate", model.name());
    }
}

#[test]
fn case_tags() {
    assert_eq!(scroll(&[1, 2]).unwrap().case(), CaseTag::RegularityOne);
    assert_eq!(veronese_surface().unwrap().case(), CaseTag::RegularityOne);
    assert_eq!(hyperelliptic_curve(2, 7).unwrap().case(), CaseTag::CurveNonSpecial);
}

#[test]
fn constructor_errors() {
    assert!(matches!(build_by_name("scroll", &[0, 1], 1), Err(Error::InvalidParameter(_))));
    assert!(build_by_name("rational-normal-curve", &[1], 1).is_err());
    assert!(build_by_name("rational-normal-curve", &[], 1).is_err());
    assert!(build_by_name("elliptic-normal-curve", &[2], 1).is_err());
    assert!(build_by_name("hyperelliptic-curve", &[2, 4], 1).is_err());
    assert!(build_by_name("quadric-hypersurface", &[0], 1).is_err());
    assert!(build_by_name("del-pezzo", &[], 1).is_err());
}

#[test]
fn elliptic_models_depend_only_on_seed() {
    let a = elliptic_normal_curve_seeded(5, 3).unwrap();
    let b = elliptic_normal_curve_seeded(5, 3).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.seed_chain(), vec![3]);
    match a.construction() {
        Construction::EllipticNormalCurve { d, .. } => assert_eq!(*d, 5),
        other => panic!("unexpected construction {other:?}"),
    }
}

#[test]
fn json_round_trip_keeps_lineage() {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let (projected, steps) = random_subspace(&quintic, 1, 4).unwrap();
    assert_eq!(steps.len(), 1);
    let text = projected.to_json().unwrap();
    let back = EmbeddedModel::from_json(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    assert_eq!(back.ambient(), 3);
    assert_eq!(back.metadata().t, 1);
    assert!(!back.is_linearly_normal());
    assert_eq!(back.lineage().len(), 2);
    assert_eq!(back.parent().unwrap().name(), quintic.name());
    assert_eq!(back.seed_chain(), projected.seed_chain());
    assert_eq!(back.generators(), projected.generators());
    assert!(EmbeddedModel::from_json("{\"name\": 1}").is_err());
}

#[test]
fn projected_quintic_invariants() {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let (projected, _) = random_subspace(&quintic, 1, 1).unwrap();
    let md = invariants(&projected).unwrap();
    assert_eq!((md.n, md.d, md.e, md.g), (1, 5, 2, 1));
    assert_eq!(projected.hilbert_polynomial().unwrap(), quintic.hilbert_polynomial().unwrap());
    assert_eq!(projected.subspace_in_root().len(), 4);
}

#[test]
fn plane_projection_of_elliptic_quartic_is_rejected() {
    // every plane quartic has arithmetic genus 3, so no seed passes
    let quartic = build_by_name("elliptic-normal-curve", &[4], 1).unwrap();
    match random_subspace(&quartic, 1, 1) {
        Err(Error::GuardFailed { reason, .. }) => assert!(reason.contains("seed"), "{reason}"),
        other => panic!("expected a guard failure, got {:?}", other.map(|m| m.0.name().to_string())),
    }
    let plane_conic = build_by_name("rational-normal-curve", &[2], 1).unwrap();
    assert!(matches!(random_subspace(&plane_conic, 1, 1), Err(Error::InvalidParameter(_))));
    assert!(random_subspace(&quartic, 0, 1).is_err());
}

#[test]
fn hyperplane_sections() {
    let s = scroll(&[1, 2]).unwrap();
    let c = curve_section(&s, 1).unwrap();
    let md = invariants(&c).unwrap();
    assert_eq!((md.n, md.d, md.e, md.g), (1, 3, 2, 0));
    assert_eq!(c.ambient(), 3);

    let v = veronese_surface().unwrap();
    let c = curve_section(&v, 2).unwrap();
    assert_eq!(invariants(&c).unwrap().d, 4);
    assert_eq!(c.ambient(), 4);

    assert!(curve_section(&c, 1).is_err());
}
