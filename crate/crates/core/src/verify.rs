//! Instance checks of the regularity and syzygy statements, with
//! structured reports. A pass means the instance is consistent with the
//! statement; it is not a proof.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::koszul::{
    coordinate_ring_table, default_window, m_normality_defect, nk_property, section_table, variety_regularity, BettiTable,
};
use crate::models::{curve_section, EmbeddedModel};
use crate::projection::{resolve_lineage, CellStatus};
use crate::section::Twist;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "mindeg")]
    MinimalDegree,
    #[serde(rename = "thm12ln")]
    LinearlyNormalSyzygies,
    #[serde(rename = "thm12proj")]
    ProjectedSyzygies,
    #[serde(rename = "thm13")]
    RegularityBound,
    #[serde(rename = "prop32_33")]
    CurveSectionInvariance,
}

impl Theorem {
    pub fn tag(&self) -> &'static str {
        match self {
            Theorem::MinimalDegree => "mindeg",
            Theorem::LinearlyNormalSyzygies => "thm12ln",
            Theorem::ProjectedSyzygies => "thm12proj",
            Theorem::RegularityBound => "thm13",
            Theorem::CurveSectionInvariance => "prop32_33",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        Ok(match tag {
            "mindeg" => Theorem::MinimalDegree,
            "thm12ln" => Theorem::LinearlyNormalSyzygies,
            "thm12proj" => Theorem::ProjectedSyzygies,
            "thm13" => Theorem::RegularityBound,
            "prop32_33" => Theorem::CurveSectionInvariance,
            other => return Err(Error::Parse(format!("unknown theorem tag {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    /// Read from the model's recorded invariants.
    Metadata,
    /// True for the catalog family but not computed here.
    CatalogAsserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub holds: bool,
    pub evidence: String,
    pub provenance: Provenance,
}

impl CheckItem {
    fn computed(name: impl Into<String>, holds: bool, evidence: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            holds,
            evidence: evidence.into(),
            provenance: Provenance::Computed,
        }
    }
    fn metadata(name: impl Into<String>, holds: bool, evidence: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            holds,
            evidence: evidence.into(),
            provenance: Provenance::Metadata,
        }
    }
    fn asserted(name: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            holds: true,
            evidence: "catalog family".into(),
            provenance: Provenance::CatalogAsserted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub model: String,
    pub field: FieldDescriptor,
    pub seed_chain: Vec<u64>,
    pub hypotheses: Vec<CheckItem>,
    pub conclusions: Vec<CheckItem>,
    pub notes: Vec<String>,
    pub status: Status,
    pub summary: String,
    pub timing_ms: u64,
}

impl VerificationReport {
    fn finish(
        theorem: Theorem,
        model: &EmbeddedModel,
        field: FieldDescriptor,
        hypotheses: Vec<CheckItem>,
        conclusions: Vec<CheckItem>,
        notes: Vec<String>,
        started: Instant,
    ) -> Self {
        let status = if hypotheses.iter().any(|h| !h.holds) {
            Status::HypothesisNotMet
        } else if conclusions.iter().all(|c| c.holds) {
            Status::Pass
        } else {
            Status::Fail
        };
        let summary = match status {
            Status::Pass => format!("{} is consistent with {}", model.name(), theorem.tag()),
            Status::Fail => {
                let failed: Vec<&str> = conclusions.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
                format!("{} contradicts {}: {}", model.name(), theorem.tag(), failed.join("; "))
            }
            Status::HypothesisNotMet => {
                let failed: Vec<&str> = hypotheses.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
                format!("{} is outside the hypotheses of {}: {}", model.name(), theorem.tag(), failed.join("; "))
            }
        };
        VerificationReport {
            theorem,
            model: model.name().to_string(),
            field,
            seed_chain: model.seed_chain(),
            hypotheses,
            conclusions,
            notes,
            status,
            summary,
            timing_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON with the timing field zeroed, for reproducibility checks.
    pub fn to_json_untimed(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.timing_ms = 0;
        copy.to_json()
    }
}

/// Aggregate CSV, one line per report.
pub fn summary_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("theorem,model,field,seed_chain,status,hypotheses_ok,conclusions_ok,timing_ms\n");
    for r in reports {
        let seeds: Vec<String> = r.seed_chain.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{}/{},{}/{},{}\n",
            r.theorem.tag(),
            csv_field(&r.model),
            r.field,
            seeds.join(";"),
            serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            r.hypotheses.iter().filter(|h| h.holds).count(),
            r.hypotheses.len(),
            r.conclusions.iter().filter(|c| c.holds).count(),
            r.conclusions.len(),
            r.timing_ms
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn full_coordinate_table(model: &EmbeddedModel, field: FieldDescriptor) -> Result<BettiTable> {
    let (_, q_max) = default_window(model);
    coordinate_table_to(model, field, q_max)
}

fn coordinate_table_to(model: &EmbeddedModel, field: FieldDescriptor, q_max: usize) -> Result<BettiTable> {
    let (p_max, _) = default_window(model);
    coordinate_ring_table(model, field, p_max.min(model.nvars()), q_max)
}

/// `reg(X) = 2` exactly for varieties of minimal degree `d = e + 1`.
pub fn verify_minimal_degree(model: &EmbeddedModel, field: FieldDescriptor) -> Result<VerificationReport> {
    let started = Instant::now();
    let md = model.metadata().clone();
    let hypotheses = vec![CheckItem::asserted("X is smooth and non-degenerate")];
    let table = full_coordinate_table(model, field)?;
    let reg = variety_regularity(&table)?;
    let minimal = md.d == md.e as u64 + 1;
    let higher_rows_zero = (2..=table.q_max).all(|q| table.row_is_zero(q));
    let defect1 = m_normality_defect(model, field, 1)?;
    let conclusions = vec![
        CheckItem::computed(
            "d = e + 1 iff reg(X) = 2",
            minimal == (reg == 2),
            format!("d = {}, e = {}, reg(X) = {reg}", md.d, md.e),
        ),
        CheckItem::computed(
            "reg(X) = 2 iff rows q >= 2 vanish and X is 1-normal",
            (reg == 2) == (higher_rows_zero && defect1 == 0),
            format!("rows q >= 2 zero: {higher_rows_zero}, 1-normality defect {defect1}"),
        ),
    ];
    Ok(VerificationReport::finish(
        Theorem::MinimalDegree,
        model,
        field,
        hypotheses,
        conclusions,
        Vec::new(),
        started,
    ))
}

fn regularity_hypotheses(model: &EmbeddedModel) -> Vec<CheckItem> {
    let n = model.metadata().n;
    let mut out = vec![CheckItem::asserted("reg(O_X) = 2")];
    if n >= 2 {
        out.push(CheckItem::asserted("H^1(O_X) = 0"));
    }
    out
}

/// Linearly normal case: `e ≥ g + k` implies `N_k`.
pub fn verify_thm12_linearly_normal(model: &EmbeddedModel, k: usize, field: FieldDescriptor) -> Result<VerificationReport> {
    let started = Instant::now();
    let md = model.metadata().clone();
    let mut hypotheses = regularity_hypotheses(model);
    hypotheses.push(CheckItem::metadata(
        "V = H^0(O_X(1))",
        md.linearly_normal,
        format!("t = {}", md.t),
    ));
    hypotheses.push(CheckItem::metadata(
        format!("e >= g + {k}"),
        md.e as i64 >= md.g + k as i64,
        format!("e = {}, g = {}", md.e, md.g),
    ));
    let p_max = model.nvars();
    let table = section_table(model, field, Twist::Zero, p_max, 3)?;
    let outcome = nk_property(&table, k)?;
    let conclusions = vec![CheckItem::computed(
        format!("N_{k}"),
        outcome.holds,
        match outcome.first_failure {
            None => format!("K_{{0,q}} = 0 for q >= 1 and K_{{p,q}} = 0 for 1 <= p <= {k}, q >= 2"),
            Some((p, q)) => format!("k_{{{p},{q}}} = {}", table.get(p, q).unwrap_or(0)),
        },
    )];
    Ok(VerificationReport::finish(
        Theorem::LinearlyNormalSyzygies,
        model,
        field,
        hypotheses,
        conclusions,
        Vec::new(),
        started,
    ))
}

/// Cells of the projected table the statement leaves open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedRanges {
    pub e: usize,
    pub g: i64,
    pub t: usize,
    pub gonality: u32,
}

impl ProjectedRanges {
    pub fn of(model: &EmbeddedModel) -> Result<Self> {
        let md = model.metadata();
        let gonality = md
            .gonality
            .ok_or_else(|| Error::Unsupported(format!("{} has no gonality metadata", model.name())))?;
        Ok(ProjectedRanges {
            e: md.e,
            g: md.g,
            t: md.t,
            gonality,
        })
    }

    /// Status the statement assigns to `(p, q)`.
    pub fn predicted(&self, p: usize, q: usize) -> CellStatus {
        let (p, e, g, t, gon) = (p as i64, self.e as i64, self.g, self.t as i64, self.gonality as i64);
        if p > e || q > 2 {
            return CellStatus::Zero;
        }
        match q {
            0 => CellStatus::of((p == 0) as usize),
            1 if p <= e + 1 - gon => CellStatus::Nonzero,
            1 if p >= e + 2 - gon + t => CellStatus::Zero,
            2 if p <= e - 1 - g => CellStatus::Zero,
            2 if p >= e - g + t => CellStatus::Nonzero,
            _ => CellStatus::Undetermined,
        }
    }

    pub fn undetermined(&self, p_max: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for q in 0..=2 {
            for p in 0..=p_max {
                if self.predicted(p, q) == CellStatus::Undetermined {
                    out.push((p, q));
                }
            }
        }
        out
    }

    fn clause(&self, p: usize, q: usize) -> &'static str {
        if p > self.e || q > 2 {
            "(i)"
        } else {
            ["(ii)", "(iii)", "(iv)"][q]
        }
    }
}

/// Projected case: the vanishing pattern (i)–(iv), cell by cell, plus the
/// resolution of the open cells one projection at a time.
pub fn verify_thm12_projected(model: &EmbeddedModel, field: FieldDescriptor) -> Result<VerificationReport> {
    let started = Instant::now();
    let md = model.metadata().clone();
    let ranges = ProjectedRanges::of(model)?;
    let mut hypotheses = regularity_hypotheses(model);
    hypotheses.push(CheckItem::metadata("V has codimension t >= 1", md.t >= 1, format!("t = {}", md.t)));
    hypotheses.push(CheckItem::metadata(
        "e >= g + 1",
        md.e as i64 >= md.g + 1,
        format!("e = {}, g = {}", md.e, md.g),
    ));
    hypotheses.push(CheckItem::metadata(
        "O_X(1) sufficiently positive (d >= 2g + 3)",
        md.d as i64 >= 2 * md.g + 3,
        format!("d = {}, g = {}", md.d, md.g),
    ));
    let p_max = model.nvars();
    let table = section_table(model, field, Twist::Zero, p_max, 3)?;
    let mut conclusions = Vec::new();
    let mut notes = Vec::new();
    for q in 0..=table.q_max {
        for p in 0..=p_max {
            let k = table.get(p, q).unwrap_or(0);
            match ranges.predicted(p, q) {
                CellStatus::Undetermined => notes.push(format!("open cell ({p},{q}): k = {k}")),
                expected => conclusions.push(CheckItem::computed(
                    format!(
                        "{} K_{{{p},{q}}} {}",
                        ranges.clause(p, q),
                        if expected == CellStatus::Zero { "= 0" } else { "!= 0" }
                    ),
                    CellStatus::of(k) == expected,
                    format!("k = {k}"),
                )),
            }
        }
    }
    conclusions.push(CheckItem::computed(
        "k_{0,1} = t",
        table.get(0, 1) == Some(md.t),
        format!("k_{{0,1}} = {}", table.get(0, 1).unwrap_or(0)),
    ));

    // open cells, resolved along the projection chain step by step
    match resolve_lineage(model, field) {
        Ok(report) => {
            let last = report.steps.last().expect("t >= 1");
            let open = ranges.undetermined(p_max);
            let decided: Vec<_> = report
                .entries
                .iter()
                .filter(|e| e.step == last.step && open.contains(&e.cell))
                .collect();
            for e in &decided {
                notes.push(format!(
                    "open cell ({},{}) resolved {:?} by {:?}{}",
                    e.cell.0,
                    e.cell.1,
                    e.predicted,
                    e.rule,
                    e.via.map(|v| format!(" via {v:?}")).unwrap_or_default()
                ));
            }
            conclusions.push(CheckItem::computed(
                "open cells: step-by-step resolution agrees with the table",
                decided.iter().all(|e| e.predicted == CellStatus::Undetermined || e.predicted == e.computed),
                format!(
                    "{} of {} open cells decided",
                    decided.iter().filter(|e| e.predicted != CellStatus::Undetermined).count(),
                    decided.len()
                ),
            ));
        }
        Err(Error::Contradiction(msg)) => conclusions.push(CheckItem::computed(
            "open cells: step-by-step resolution agrees with the table",
            false,
            msg,
        )),
        Err(Error::InvalidParameter(msg)) => notes.push(msg),
        Err(e) => return Err(e),
    }
    Ok(VerificationReport::finish(
        Theorem::ProjectedSyzygies,
        model,
        field,
        hypotheses,
        conclusions,
        notes,
        started,
    ))
}

/// `reg(X) ≤ d − e + 1 − g` for non-linearly-normal `X` with
/// `reg(O_X) = 2`.
pub fn verify_thm13_bound(model: &EmbeddedModel, field: FieldDescriptor) -> Result<VerificationReport> {
    let started = Instant::now();
    let md = model.metadata().clone();
    let bound = md.d as i64 - md.e as i64 + 1 - md.g;
    let mut hypotheses = regularity_hypotheses(model);
    hypotheses.push(CheckItem::metadata(
        "X is not linearly normal",
        !md.linearly_normal,
        format!("t = {}", md.t),
    ));
    hypotheses.push(CheckItem::metadata(
        "e >= g + 1",
        md.e as i64 >= md.g + 1,
        format!("e = {}, g = {}", md.e, md.g),
    ));
    // one row past the bound, so that reg = bound + 1 is still certified
    let table = coordinate_table_to(model, field, 3.max(bound + 1) as usize)?;
    let reg = variety_regularity(&table)? as i64;
    let mut notes = Vec::new();
    if md.linearly_normal {
        notes.push(format!(
            "linearly normal: reg(X) = {reg} {} d - e + 1 - g = {bound}",
            if reg > bound { ">" } else { "<=" }
        ));
    }
    let sections = section_table(model, field, Twist::Zero, 1, 1)?;
    let k01 = sections.get(0, 1).unwrap_or(0) as i64;
    let m = md.d as i64 - md.e as i64 - md.g;
    let defect = if m >= 0 {
        Some(m_normality_defect(model, field, m as i32)?)
    } else {
        None
    };
    let conclusions = vec![
        CheckItem::computed(
            "reg(X) <= d - e + 1 - g",
            reg <= bound,
            format!("reg(X) = {reg}, d - e + 1 - g = {bound}"),
        ),
        CheckItem::computed(
            "k_{0,1} = d - e - g - 1",
            k01 == m - 1,
            format!("k_{{0,1}} = {k01}, d - e - g - 1 = {}", m - 1),
        ),
        CheckItem::computed(
            "(d - e - g)-normal",
            defect == Some(0),
            match defect {
                Some(d) => format!("defect in degree {m} is {d}"),
                None => format!("degree {m} is negative"),
            },
        ),
    ];
    Ok(VerificationReport::finish(
        Theorem::RegularityBound,
        model,
        field,
        hypotheses,
        conclusions,
        notes,
        started,
    ))
}

/// Sectional genus from a curve section, and equality of the Betti tables
/// of `X` and of its curve section.
pub fn verify_prop32_prop33(model: &EmbeddedModel, seed: u64, field: FieldDescriptor) -> Result<VerificationReport> {
    let started = Instant::now();
    let md = model.metadata().clone();
    let mut hypotheses = vec![
        CheckItem::metadata("n >= 2", md.n >= 2, format!("n = {}", md.n)),
        CheckItem::asserted("H^1(O_X) = 0"),
    ];
    hypotheses.extend(regularity_hypotheses(model).into_iter().filter(|h| h.name == "reg(O_X) = 2"));
    if md.n < 2 {
        return Ok(VerificationReport::finish(
            Theorem::CurveSectionInvariance,
            model,
            field,
            hypotheses,
            Vec::new(),
            Vec::new(),
            started,
        ));
    }
    let section = curve_section(model, seed)?;
    let genus = section.hilbert_polynomial()?.genus();
    let (p_max, q_max) = default_window(model);
    let p_max = p_max.min(model.nvars());
    let x_table = coordinate_ring_table(model, field, p_max, q_max)?;
    let c_table = coordinate_ring_table(&section, field, p_max.min(section.nvars()), q_max)?;
    let mut mismatches = Vec::new();
    for q in 0..=q_max {
        for p in 0..=p_max {
            let a = x_table.get(p, q).unwrap_or(0);
            let b = c_table.get_or_trivial(p as i64, q as i64).unwrap_or(0);
            if a != b {
                mismatches.push(format!("({p},{q}): {a} vs {b}"));
            }
        }
    }
    let conclusions = vec![
        CheckItem::computed(
            "sectional genus equals catalog g",
            genus == md.g,
            format!("1 - P_C(0) = {genus}, g = {}", md.g),
        ),
        CheckItem::computed(
            "Betti tables of X and its curve section agree",
            mismatches.is_empty(),
            if mismatches.is_empty() {
                format!("{} cells compared", (p_max + 1) * (q_max + 1))
            } else {
                mismatches.join(", ")
            },
        ),
    ];
    Ok(VerificationReport::finish(
        Theorem::CurveSectionInvariance,
        model,
        field,
        hypotheses,
        conclusions,
        vec![format!("curve section seed {seed}")],
        started,
    ))
}
