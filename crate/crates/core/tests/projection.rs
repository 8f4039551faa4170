use syzygy::field::{FieldDescriptor, PrimeField};
use syzygy::koszul::section_table;
use syzygy::models::{build_by_name, hyperelliptic_curve, EmbeddedModel};
use syzygy::projection::{
    build_ev_matrix, corollary_predict, diagram_commutes, ev_gate, les_consistency, project_once,
    resolution_procedure, resolve_lineage, step_over, CellStatus, Corollary, EvGate, KnownCells, Rule,
};
use syzygy::section::{SectionModule, Twist};
use syzygy::Error;

const FP: FieldDescriptor = FieldDescriptor::Prime { p: 32003 };

fn quintic() -> EmbeddedModel {
    build_by_name("elliptic-normal-curve", &[5], 1).unwrap()
}

#[test]
fn les_holds_on_projected_quintic() {
    let parent = quintic();
    let pt = section_table(&parent, FP, Twist::Zero, 5, 3).unwrap();
    for seed in 1..=4 {
        let (child, _) = project_once(&parent, seed).unwrap();
        let ct = section_table(&child, FP, Twist::Zero, 5, 3).unwrap();
        let report = les_consistency(&pt, &ct).unwrap();
        assert!(report.checked > 0);
        assert!(report.violations.is_empty(), "seed {seed}: {:?}", report.violations);
    }
}

#[test]
fn les_detects_inconsistent_tables() {
    let parent = quintic();
    let pt = section_table(&parent, FP, Twist::Zero, 5, 3).unwrap();
    let (child, _) = project_once(&parent, 1).unwrap();
    let mut ct = section_table(&child, FP, Twist::Zero, 5, 3).unwrap();
    assert!(les_consistency(&pt, &pt).is_err());
    let mut wrong_twist = ct.clone();
    wrong_twist.twist = Twist::Canonical;
    assert!(les_consistency(&pt, &wrong_twist).is_err());
    // K_{2,1}(V) = 5 cannot come from K_{2,1}(W) + K_{1,1}(W) = 0 + 0
    ct.entries[1][1] = 0;
    ct.entries[1][2] = 0;
    let report = les_consistency(&pt, &ct).unwrap();
    assert!(report.violations.iter().any(|v| v.cell == (2, 1)));
}

#[test]
fn predictions_on_quintic_table() {
    let parent = quintic();
    let pt = section_table(&parent, FP, Twist::Zero, 5, 3).unwrap();
    let known = KnownCells::new(4).with_structural_row_zero();

    let p = corollary_predict(&pt, &known, Corollary::Les, 1, 1, None);
    assert_eq!((p.status, p.rule), (CellStatus::Nonzero, Rule::LongExactSequence));
    let p = corollary_predict(&pt, &known, Corollary::Les, 3, 1, None);
    assert_eq!(p.status, CellStatus::Zero);

    let open = corollary_predict(&pt, &known, Corollary::EvaluationRowOne, 2, 1, None);
    assert_eq!(open.status, CellStatus::Undetermined);
    assert!(open.note.unwrap().contains("generality"));

    let full = EvGate { rank_at_center: 5, generic_rank: 5, rows: 5 };
    let low = EvGate { rank_at_center: 4, generic_rank: 4, rows: 5 };
    assert_eq!(corollary_predict(&pt, &known, Corollary::EvaluationRowOne, 2, 1, Some(full)).status, CellStatus::Zero);
    let deficient = corollary_predict(&pt, &known, Corollary::EvaluationRowOne, 2, 1, Some(low));
    assert_eq!(deficient.status, CellStatus::Nonzero);
    assert!(deficient.note.unwrap().contains("not injective"));

    assert_eq!(corollary_predict(&pt, &known, Corollary::EvaluationRowOne, 1, 1, None).rule, Rule::NoRule);
    assert_eq!(corollary_predict(&pt, &known, Corollary::EvaluationRowZero, 2, 1, None).rule, Rule::NoRule);
}

#[test]
fn quintic_evaluation_matrix_is_skew_of_rank_four() {
    let f = PrimeField::new(32003).unwrap();
    let module = SectionModule::sections(&quintic(), f, Twist::Zero, 0, 2).unwrap();
    let ev = build_ev_matrix(&module, 2, 1).unwrap();
    assert_eq!(ev.shape(), (5, 5));
    assert!(ev.is_linear());
    assert_eq!(ev.generic_rank(11, 5), 4);
    let (_, step) = project_once(&quintic(), 1).unwrap();
    let (v, _) = step_over(&f, &step);
    assert_eq!(ev.rank_at(&v), 4);
    assert!(build_ev_matrix(&module, 2, 3).is_err());
}

#[test]
fn gate_matches_direct_cell() {
    let parent = quintic();
    let (child, step) = project_once(&parent, 2).unwrap();
    let gate = ev_gate(&parent, FP, Twist::Zero, &step, 2, 1).unwrap();
    let ct = section_table(&child, FP, Twist::Zero, 4, 2).unwrap();
    assert_eq!(gate.rank_at_center == gate.rows, ct.get(2, 1) == Some(0));
}

#[test]
fn diagram_commutes_for_genus_two() {
    let parent = hyperelliptic_curve(2, 7).unwrap();
    let (child, step) = project_once(&parent, 5).unwrap();
    let f = PrimeField::new(32003).unwrap();
    let pm = SectionModule::sections(&parent, f, Twist::Zero, -1, 3).unwrap();
    let cm = SectionModule::sections(&child, f, Twist::Zero, -1, 3).unwrap();
    let (v, u) = step_over(&f, &step);
    for (p, q) in [(1usize, 1i32), (2, 1), (3, 1), (2, 2), (3, 2), (4, 2)] {
        let check = diagram_commutes(&pm, &cm, &v, &u, p, q).unwrap();
        assert!(check.commutes, "({p},{q})");
    }
}

#[test]
fn procedure_on_sextic_resolves_everything() {
    let sextic = build_by_name("elliptic-normal-curve", &[6], 1).unwrap();
    let (child, report) = resolution_procedure(&sextic, 2, 3, FP).unwrap();
    assert_eq!(child.metadata().t, 2);
    assert_eq!(report.steps.len(), 2);
    assert!(report.final_undetermined().is_empty());
    for entry in &report.entries {
        assert!(entry.predicted == CellStatus::Undetermined || entry.predicted == entry.computed);
    }
    let again = resolve_lineage(&child, FP).unwrap();
    assert_eq!(again, report);
    assert!(matches!(resolve_lineage(&sextic, FP), Err(Error::InvalidParameter(_))));
    assert!(resolution_procedure(&sextic, 0, 3, FP).is_err());
}
