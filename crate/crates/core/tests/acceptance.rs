//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p syzygy-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use syzygy::field::{FieldDescriptor, PrimeField};
use syzygy::koszul::{
    coordinate_ring_table, green_duality_check, nk_property, section_table, variety_regularity, BettiTable,
};
use syzygy::models::{
    build_by_name, hyperelliptic_curve, quadric_hypersurface, rational_normal_curve, scroll, veronese_surface,
    EmbeddedModel,
};
use syzygy::projection::{
    build_ev_matrix, diagram_commutes, les_consistency, project_once, random_subspace, resolve_lineage, step_over,
    EvMatrix,
};
use syzygy::section::{SectionModule, Twist};
use syzygy::verify::{verify_prop32_prop33, verify_thm12_projected, verify_thm13_bound, Status};
use syzygy::Result;

const FP: FieldDescriptor = FieldDescriptor::Prime { p: 32003 };
const Q: FieldDescriptor = FieldDescriptor::Rational;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], ok: String) -> Self {
        if failures.is_empty() {
            Outcome { pass: true, detail: ok }
        } else {
            Outcome {
                pass: false,
                detail: failures.join("; "),
            }
        }
    }
}

fn minimal_degree_models() -> Vec<EmbeddedModel> {
    let mut out: Vec<EmbeddedModel> = (2..=5).map(|a| rational_normal_curve(a).unwrap()).collect();
    for a in [[1, 1], [1, 2], [2, 2]] {
        out.push(scroll(&a).unwrap());
    }
    out.push(veronese_surface().unwrap());
    out.extend((1..=3).map(|n| quadric_hypersurface(n).unwrap()));
    out
}

fn linearly_normal_curves() -> Vec<EmbeddedModel> {
    let mut out: Vec<EmbeddedModel> =
        (4..=7).map(|d| build_by_name("elliptic-normal-curve", &[d], 1).unwrap()).collect();
    out.push(hyperelliptic_curve(2, 7).unwrap());
    out.push(hyperelliptic_curve(2, 8).unwrap());
    out
}

fn projected_instances() -> Vec<EmbeddedModel> {
    let quintic = build_by_name("elliptic-normal-curve", &[5], 1).unwrap();
    let sextic = build_by_name("elliptic-normal-curve", &[6], 1).unwrap();
    vec![
        random_subspace(&quintic, 1, 1).unwrap().0,
        random_subspace(&sextic, 1, 1).unwrap().0,
        random_subspace(&sextic, 2, 1).unwrap().0,
    ]
}

fn minimal_degree_table(model: &EmbeddedModel, field: FieldDescriptor) -> Result<BettiTable> {
    coordinate_ring_table(model, field, model.nvars(), 3)
}

fn curve_table(model: &EmbeddedModel, field: FieldDescriptor) -> Result<BettiTable> {
    section_table(model, field, Twist::Zero, model.nvars(), 3)
}

fn criterion_1() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for model in minimal_degree_models() {
        let started = Instant::now();
        let table = minimal_degree_table(&model, FP)?;
        let elapsed = started.elapsed();
        slowest = slowest.max(elapsed);
        let md = model.metadata();
        let reg = variety_regularity(&table)?;
        let high_rows_zero = (2..=table.q_max).all(|q| table.row_is_zero(q));
        if reg != 2 || !high_rows_zero || md.d != md.e as u64 + 1 || elapsed > Duration::from_secs(60) {
            failures.push(format!("{}: reg {reg}, rows q>=2 zero {high_rows_zero}, d {} e {}", model.name(), md.d, md.e));
        }
    }
    Ok(Outcome::new(
        &failures,
        format!("11 varieties of minimal degree have reg = 2 and zero rows q >= 2 (slowest {slowest:?})"),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for model in linearly_normal_curves() {
        let table = curve_table(&model, FP)?;
        let md = model.metadata();
        let bound = (md.e as i64 - md.g) as usize;
        let holds = (0..=bound).all(|k| nk_property(&table, k).map(|o| o.holds).unwrap_or(false));
        let next = nk_property(&table, bound + 1)?;
        let top = table.get(bound + 1, 2).unwrap_or(0);
        if !holds || next.holds || next.first_failure != Some((bound + 1, 2)) || top == 0 {
            failures.push(format!("{}: N_k up to {bound} {holds}, N_{} {:?}", model.name(), bound + 1, next));
        }
        seen.push(format!("{} N_{bound}", model.name()));
    }
    Ok(Outcome::new(&failures, format!("exact N_(e-g), failing at k = e-g+1: {}", seen.join(", "))))
}

fn criterion_3() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut resolved = 0;
    for model in projected_instances() {
        let report = verify_thm12_projected(&model, FP)?;
        if report.status != Status::Pass {
            failures.push(report.summary.clone());
        }
        let procedure = resolve_lineage(&model, FP)?;
        if !procedure.final_undetermined().is_empty() {
            failures.push(format!("{}: open cells left {:?}", model.name(), procedure.final_undetermined()));
        }
        resolved += report.notes.iter().filter(|n| n.contains("resolved")).count();
    }
    Ok(Outcome::new(
        &failures,
        format!("determined cells match on 3 projected curves; {resolved} open cells resolved in agreement"),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let mut failures = Vec::new();
    for model in projected_instances() {
        let report = verify_thm13_bound(&model, FP)?;
        if report.status != Status::Pass || report.conclusions.len() != 3 {
            failures.push(report.summary.clone());
        }
    }
    Ok(Outcome::new(&failures, "reg bound, k_{0,1} identity and normality hold on 3 projected curves".into()))
}

fn criterion_5() -> Result<Outcome> {
    let mut failures = Vec::new();
    let models = [
        scroll(&[1, 2])?,
        scroll(&[2, 2])?,
        veronese_surface()?,
        quadric_hypersurface(2)?,
    ];
    for model in &models {
        for seed in 1..=3 {
            let report = verify_prop32_prop33(model, seed, FP)?;
            if report.status != Status::Pass {
                failures.push(format!("seed {seed}: {}", report.summary));
            }
        }
    }
    Ok(Outcome::new(&failures, "X and its curve section agree cellwise, 4 surfaces x 3 seeds".into()))
}

fn criterion_6() -> Result<Outcome> {
    let f = PrimeField::new(32003)?;
    let mut parents: Vec<EmbeddedModel> =
        (5..=7).map(|d| build_by_name("elliptic-normal-curve", &[d], 1).unwrap()).collect();
    parents.push(hyperelliptic_curve(2, 7)?);
    parents.push(hyperelliptic_curve(2, 8)?);

    let mut failures = Vec::new();
    let mut literal = Vec::new();
    let (mut projections, mut les_checked, mut predictions, mut squares) = (0, 0, 0, 0);
    let (mut hypothesis_cells, mut centre_checks, mut no_room) = (0, 0, 0);
    for parent in &parents {
        let n_v = parent.nvars();
        let parent_o = curve_table(parent, FP)?;
        let parent_k = section_table(parent, FP, Twist::Canonical, n_v, 1)?;
        let pm = SectionModule::sections(parent, f, Twist::Zero, -1, 3)?;
        let pk = SectionModule::sections(parent, f, Twist::Canonical, -1, 2)?;

        // (d) cells where the injectivity statements apply: p >= 2 in row 1
        // once K_{i,0}(V) = 0 for i >= 1, and p >= 1 in row 0 of K_C
        let mut cells = Vec::new();
        if (1..=parent_o.p_max).all(|i| parent_o.get(i, 0) == Some(0)) {
            for p in 2..=n_v {
                if parent_o.get(p, 1).unwrap_or(0) > 0 {
                    let room = parent_o.get(p - 1, 1).unwrap_or(0) >= parent_o.get(p, 1).unwrap_or(0);
                    cells.push(EvCell { twist: Twist::Zero, p, room, ev: build_ev_matrix(&pm, p, 1)? });
                }
            }
        }
        for p in 1..=n_v {
            if parent_k.get(p, 0).unwrap_or(0) > 0 {
                let room = parent_k.get(p - 1, 0).unwrap_or(0) >= parent_k.get(p, 0).unwrap_or(0);
                cells.push(EvCell { twist: Twist::Canonical, p, room, ev: build_ev_matrix(&pk, p, 0)? });
            }
        }
        for cell in &cells {
            hypothesis_cells += 1;
            let rows = cell.ev.shape().0;
            if !cell.ev.scalar_injective() {
                failures.push(format!("{}: H0(ev) at {} is not injective", parent.name(), cell.label()));
            }
            // a general centre can only be injective when k_{p-1} >= k_p
            if !cell.room {
                no_room += 1;
                continue;
            }
            let generic = cell.ev.generic_rank(0x5EED, 5);
            if generic < rows {
                literal.push(format!("{} {} rank {generic}/{rows}", parent.name(), cell.label()));
            }
        }
        for seed in 1..=4u64 {
            let (child, step) = project_once(parent, seed)?;
            projections += 1;
            let tag = format!("{} seed {}", parent.name(), step.seed);
            let child_o = section_table(&child, FP, Twist::Zero, n_v, 3)?;
            let child_k = section_table(&child, FP, Twist::Canonical, n_v, 1)?;

            // (a) exactness inequalities
            for (pt, ct) in [(&parent_o, &child_o), (&parent_k, &child_k)] {
                let les = les_consistency(pt, ct)?;
                les_checked += les.checked;
                for v in les.violations {
                    failures.push(format!("{tag}: {}", v.inequality));
                }
            }

            // (b) every corollary prediction against the direct table
            match resolve_lineage(&child, FP) {
                Ok(report) => predictions += report.entries.len(),
                Err(e) => failures.push(format!("{tag}: {e}")),
            }

            // (c) the square commutes as matrices
            let cm = SectionModule::sections(&child, f, Twist::Zero, -1, 3)?;
            let (v, u) = step_over(&f, &step);
            for q in 1..=2usize {
                for p in 1..=n_v {
                    if parent_o.get(p, q).unwrap_or(0) == 0 {
                        continue;
                    }
                    squares += 1;
                    if !diagram_commutes(&pm, &cm, &v, &u, p, q as i32)?.commutes {
                        failures.push(format!("{tag}: square at ({p},{q}) does not commute"));
                    }
                }
            }

            // (d) rank of ev_v at this centre against the child cell
            for cell in &cells {
                let rank = cell.ev.rank_at(&v);
                let k_w = match cell.twist {
                    Twist::Zero => child_o.get(cell.p, 1),
                    Twist::Canonical => child_k.get(cell.p, 0),
                }
                .unwrap_or(0);
                centre_checks += 1;
                let rows = cell.ev.shape().0;
                if (rank == rows) != (k_w == 0) {
                    failures.push(format!("{tag}: ev_v at {} has rank {rank} of {rows} but k_W = {k_w}", cell.label()));
                }
            }
        }
    }
    let summary = format!(
        "{projections} projections: {les_checked} exactness checks, {predictions} predictions, {squares} commuting \
         squares; H0(ev) injective into V (x) K in {hypothesis_cells} cells; rank of ev_v at the centre decides \
         k_W in {centre_checks} checks"
    );
    if !literal.is_empty() {
        failures.push(format!(
            "ev_v is not injective at a general centre in {} of {} cells with k_(p-1) >= k_p: {}",
            literal.len(),
            hypothesis_cells - no_room,
            literal.join(", ")
        ));
    }
    let mut outcome = Outcome::new(&failures, summary.clone());
    if !outcome.pass {
        outcome.detail = format!("{}; otherwise {summary}", outcome.detail);
    }
    Ok(outcome)
}

struct EvCell {
    twist: Twist,
    p: usize,
    room: bool,
    ev: EvMatrix<PrimeField>,
}

impl EvCell {
    fn label(&self) -> String {
        match self.twist {
            Twist::Zero => format!("({},1)", self.p),
            Twist::Canonical => format!("({},0,K)", self.p),
        }
    }
}

fn criterion_7() -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut compared = 0;
    let mut slowest = (Duration::ZERO, String::new());
    let mut compare = |model: &EmbeddedModel, table: &dyn Fn(&EmbeddedModel, FieldDescriptor) -> Result<BettiTable>| -> Result<()> {
        let started = Instant::now();
        let tq = table(model, Q)?;
        let elapsed = started.elapsed();
        if elapsed > slowest.0 {
            slowest = (elapsed, model.name().to_string());
        }
        let tp = table(model, FP)?;
        compared += 1;
        if !tq.same_values(&tp) {
            failures.push(format!("{}: Q {:?} vs F_p {:?}", model.name(), tq.entries, tp.entries));
        }
        Ok(())
    };
    for model in minimal_degree_models() {
        compare(&model, &minimal_degree_table)?;
    }
    for model in linearly_normal_curves().iter().chain(projected_instances().iter()) {
        compare(model, &curve_table)?;
    }
    Ok(Outcome::new(
        &failures,
        format!("{compared} tables identical over Q and F_32003 (slowest Q table {:?}, {})", slowest.0, slowest.1),
    ))
}

fn criterion_8() -> Result<(Outcome, String)> {
    let mut failures = Vec::new();
    let mut literal_mismatches = Vec::new();
    for d in [5, 6] {
        let model = build_by_name("elliptic-normal-curve", &[d], 1)?;
        let report = green_duality_check(&model, FP)?;
        if !report.all_equal {
            failures.push(format!("{}: {:?}", model.name(), report.rows));
        }
        // the same identity with codim(C) in place of dim P(V) - 2
        let e = model.metadata().e as i64;
        let canonical = section_table(&model, FP, Twist::Canonical, model.nvars(), 0)?;
        for row in &report.rows {
            let shifted = canonical.get_or_trivial(e + 1 - row.p as i64, 0).unwrap_or(0);
            if shifted != row.k_p2 {
                literal_mismatches.push(format!("{} p={}: {} vs {}", model.name(), row.p, row.k_p2, shifted));
            }
        }
    }
    let literal = if literal_mismatches.is_empty() {
        "index e+1-p with e = codim C agrees as well".to_string()
    } else {
        format!("index e+1-p with e = codim C differs: {}", literal_mismatches.join(", "))
    };
    Ok((
        Outcome::new(&failures, "k_{p,2}(C,V) = k_{r-1-p,0}(C,K_C,V), r = dim P(V), for all p on d = 5, 6".into()),
        literal,
    ))
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |n: usize, result: Result<Outcome>, started: Instant| {
        let outcome = result.unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
        });
        all_pass &= outcome.pass;
        println!(
            "criterion {n}: {} ({}) [{:.1}s]",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            started.elapsed().as_secs_f64()
        );
    };
    let criteria: [fn() -> Result<Outcome>; 7] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
    ];
    for (i, run) in criteria.iter().enumerate() {
        let started = Instant::now();
        report(i + 1, run(), started);
    }
    let started = Instant::now();
    match criterion_8() {
        Ok((outcome, literal)) => {
            report(8, Ok(outcome), started);
            println!("  note: {literal}");
        }
        Err(e) => report(8, Err(e), started),
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
