use syzygy::field::{FieldDescriptor, PrimeField, Rationals};
use syzygy::koszul::{
    check_complex, coordinate_ring_table, euler_characteristics, green_duality_check, koszul_cohomology_dim,
    m_normality_defect, nk_property, regularity_from_table, section_table, variety_regularity, BettiTable,
};
use syzygy::models::{build_by_name, hyperelliptic_curve, rational_normal_curve, scroll, veronese_surface};
use syzygy::projection::random_subspace;
use syzygy::section::{SectionModule, Twist};
use syzygy::Error;

const FP: FieldDescriptor = FieldDescriptor::Prime { p: 32003 };

fn rows(table: &BettiTable) -> Vec<Vec<usize>> {
    table.entries.clone()
}

#[test]
fn rational_normal_curves_are_eagon_northcott() {
    for a in 2..=5usize {
        let model = rational_normal_curve(a as u32).unwrap();
        let table = coordinate_ring_table(&model, FP, a + 1, 3).unwrap();
        for p in 1..=a {
            let expect = p * binomial(a, p + 1);
            assert_eq!(table.get(p, 1), Some(expect), "a = {a}, p = {p}");
        }
        assert!(table.row_is_zero(2) && table.row_is_zero(3));
        assert_eq!(variety_regularity(&table).unwrap(), 2);
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn veronese_and_scroll_tables() {
    let v = veronese_surface().unwrap();
    let t = coordinate_ring_table(&v, FP, 5, 3).unwrap();
    assert_eq!(t.entries[1], vec![0, 6, 8, 3, 0, 0]);
    let s = scroll(&[2, 2]).unwrap();
    let t = coordinate_ring_table(&s, FP, 5, 3).unwrap();
    assert_eq!(t.entries[1], vec![0, 6, 8, 3, 0, 0]);
}

#[test]
fn elliptic_quintic_is_pfaffian() {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let t = section_table(&quintic, FP, Twist::Zero, 5, 3).unwrap();
    assert_eq!(
        rows(&t),
        vec![vec![1, 0, 0, 0, 0, 0], vec![0, 5, 5, 0, 0, 0], vec![0, 0, 0, 1, 0, 0], vec![0; 6]]
    );
    let coord = coordinate_ring_table(&quintic, FP, 5, 3).unwrap();
    assert!(coord.same_values(&t));
    assert_eq!(regularity_from_table(&t).unwrap(), 2);
    assert_eq!(variety_regularity(&coord).unwrap(), 3);
    assert!(variety_regularity(&t).is_err());
}

#[test]
fn rational_and_prime_tables_agree() {
    let model = rational_normal_curve(4).unwrap();
    let tq = coordinate_ring_table(&model, FieldDescriptor::Rational, 5, 2).unwrap();
    let tp = coordinate_ring_table(&model, FP, 5, 2).unwrap();
    assert!(tq.same_values(&tp));
    assert_ne!(tq.field, tp.field);
}

#[test]
fn nk_on_elliptic_curves() {
    for d in 4..=7usize {
        let model = build_by_name("elliptic-normal-curve", &[d as u32], 1).unwrap();
        let table = section_table(&model, FP, Twist::Zero, model.nvars(), 3).unwrap();
        let e = d - 2;
        assert!(nk_property(&table, e - 1).unwrap().holds, "d = {d}");
        let fail = nk_property(&table, e).unwrap();
        assert!(!fail.holds);
        assert_eq!(fail.first_failure, Some((e, 2)));
    }
}

#[test]
fn nk_requires_enough_columns() {
    let model = build_by_name("elliptic-normal-curve", &[6], 1).unwrap();
    let table = section_table(&model, FP, Twist::Zero, 2, 3).unwrap();
    assert!(matches!(nk_property(&table, 4), Err(Error::Inconclusive(_))));
}

#[test]
fn regularity_needs_zero_row() {
    let model = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let short = section_table(&model, FP, Twist::Zero, 5, 2).unwrap();
    assert!(matches!(regularity_from_table(&short), Err(Error::Inconclusive(_))));
}

#[test]
fn normality_defects() {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    assert_eq!(m_normality_defect(&quintic, FP, 1).unwrap(), 0);
    let (projected, _) = random_subspace(&quintic, 1, 1).unwrap();
    assert_eq!(m_normality_defect(&projected, FP, 1).unwrap(), 1);
    assert_eq!(m_normality_defect(&projected, FP, 2).unwrap(), 0);
    assert!(m_normality_defect(&projected, FP, -1).is_err());
}

#[test]
fn green_duality_on_elliptic_and_hyperelliptic() {
    for model in [
        build_by_name("elliptic-normal-curve", &[5], 1).unwrap(),
        build_by_name("elliptic-normal-curve", &[6], 1).unwrap(),
        hyperelliptic_curve(2, 7).unwrap(),
    ] {
        let report = green_duality_check(&model, FP).unwrap();
        assert!(report.all_equal, "{}: {:?}", model.name(), report.rows);
    }
    assert!(green_duality_check(&veronese_surface().unwrap(), FP).is_err());
}

#[test]
fn canonical_twist_of_elliptic_is_structure_sheaf() {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let o = section_table(&quintic, FP, Twist::Zero, 5, 2).unwrap();
    let k = section_table(&quintic, FP, Twist::Canonical, 5, 2).unwrap();
    assert!(o.same_values(&k));
    assert!(section_table(&veronese_surface().unwrap(), FP, Twist::Canonical, 3, 1).is_err());
}

#[test]
fn complex_and_euler_characteristic() {
    let model = hyperelliptic_curve(2, 7).unwrap();
    let module = SectionModule::sections(&model, PrimeField::new(32003).unwrap(), Twist::Zero, -1, 4).unwrap();
    assert!(check_complex(&module).unwrap());
    assert!(module.check_commutation().unwrap());
    for s in 0..=3 {
        let (chains, cohom) = euler_characteristics(&module, s).unwrap();
        assert_eq!(chains, cohom, "total degree {s}");
    }
}

#[test]
fn window_errors_are_reported() {
    let cubic = rational_normal_curve(3).unwrap();
    let module = SectionModule::coordinate_ring(&cubic, Rationals, 0, 2).unwrap();
    assert!(matches!(koszul_cohomology_dim(&module, 1, 2, false), Err(Error::Window { .. })));
    let cell = koszul_cohomology_dim(&module, 1, 1, true).unwrap();
    assert_eq!(cell.dim, 3);
    assert_eq!(cell.representatives.map(|r| r.len()), Some(3));
}
