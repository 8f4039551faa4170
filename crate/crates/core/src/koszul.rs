//! Koszul complexes of section modules, their cohomology, Betti tables,
//! regularity, normality defects, `N_k` and duality checks.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::linalg::{dense_to_sparse, Rref, SparseMatrix, SparseVec};
use crate::models::EmbeddedModel;
use crate::section::{ModuleKind, SectionModule, Twist};
use crate::with_field;

/// Strictly increasing index tuples of size `p` from `0..n`, lexicographic.
pub fn wedge_basis(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - p + i {
                cur[i] += 1;
                for j in i + 1..p {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The complex `Λ^p V ⊗ M_q → Λ^{p−1} V ⊗ M_{q+1}` over a section module,
/// with ranks of differentials cached.
pub struct KoszulComplex<'a, F: Field> {
    module: &'a SectionModule<F>,
    wedges: Vec<Vec<Vec<usize>>>,
    wedge_index: Vec<HashMap<Vec<usize>, usize>>,
    ranks: Mutex<HashMap<(usize, i32), usize>>,
}

impl<'a, F: Field> KoszulComplex<'a, F> {
    pub fn new(module: &'a SectionModule<F>) -> Self {
        let n = module.v_dim();
        let wedges: Vec<Vec<Vec<usize>>> = (0..=n).map(|p| wedge_basis(n, p)).collect();
        let wedge_index = wedges
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        KoszulComplex {
            module,
            wedges,
            wedge_index,
            ranks: Mutex::new(HashMap::new()),
        }
    }

    pub fn module(&self) -> &SectionModule<F> {
        self.module
    }

    pub fn v_dim(&self) -> usize {
        self.module.v_dim()
    }

    pub fn wedges(&self, p: usize) -> &[Vec<usize>] {
        self.wedges.get(p).map(|v| v.as_slice()).unwrap_or(&[])
    }

    fn wedge_count(&self, p: i64) -> usize {
        if p < 0 || p as usize > self.v_dim() {
            0
        } else {
            self.wedges[p as usize].len()
        }
    }

    /// `dim Λ^p V ⊗ M_q`.
    pub fn chain_dim(&self, p: i64, q: i32) -> Result<usize> {
        let w = self.wedge_count(p);
        if w == 0 {
            return Ok(0);
        }
        Ok(w * self.module.dim(q)?)
    }

    /// Index of `e_I ⊗ f_k` in `Λ^p V ⊗ M_q`.
    pub fn chain_index(&self, wedge: usize, k: usize, q: i32) -> Result<usize> {
        Ok(wedge * self.module.dim(q)? + k)
    }

    pub fn wedge_position(&self, p: usize, w: &[usize]) -> Option<usize> {
        self.wedge_index.get(p)?.get(w).copied()
    }

    /// Matrix of `e_I ⊗ f ↦ Σ_j (−1)^j e_{I∖i_j} ⊗ v_{i_j} f`, `j` 1-based.
    pub fn differential(&self, p: usize, q: i32) -> Result<SparseMatrix<F>> {
        let f = self.module.field();
        self.module.require(q, q + 1)?;
        let src_dim = self.chain_dim(p as i64, q)?;
        let dst_dim = self.chain_dim(p as i64 - 1, q + 1)?;
        if src_dim == 0 || dst_dim == 0 || p == 0 {
            return Ok(SparseMatrix::zero(f.clone(), dst_dim, src_dim));
        }
        let mq = self.module.dim(q)?;
        let mq1 = self.module.dim(q + 1)?;
        let mut triplets = Vec::new();
        for (a, wedge) in self.wedges[p].iter().enumerate() {
            for j in 0..p {
                let i = wedge[j];
                let mut rest = wedge.clone();
                rest.remove(j);
                let b = self.wedge_index[p - 1][&rest];
                // 1-based position j+1
                let negative = (j + 1) % 2 == 1;
                let mult = self.module.v_mult(i, q)?;
                for (row, col, v) in mult.triplets() {
                    let val = if negative { f.neg(v) } else { v.clone() };
                    triplets.push((b * mq1 + row, a * mq + col, val));
                }
            }
        }
        SparseMatrix::from_triplets(f.clone(), dst_dim, src_dim, triplets)
    }

    /// Rank of the differential leaving `(p, q)`, cached.
    pub fn rank(&self, p: usize, q: i32) -> Result<usize> {
        if let Some(r) = self.ranks.lock().unwrap().get(&(p, q)) {
            return Ok(*r);
        }
        let r = self.differential(p, q)?.rank();
        self.ranks.lock().unwrap().insert((p, q), r);
        Ok(r)
    }

    /// `k_{p,q}`.
    pub fn cohomology_dim(&self, p: usize, q: i32) -> Result<usize> {
        self.module.require(q - 1, q + 1)?;
        let c = self.chain_dim(p as i64, q)?;
        if c == 0 {
            return Ok(0);
        }
        let out = self.rank(p, q)?;
        let inc = self.rank(p + 1, q - 1)?;
        Ok(c - out - inc)
    }

    /// Cohomology at `(p, q)` with deterministic representatives.
    pub fn cohomology_basis(&self, p: usize, q: i32) -> Result<CohomologyBasis<F>> {
        self.module.require(q - 1, q + 1)?;
        let f = self.module.field().clone();
        let n = self.chain_dim(p as i64, q)?;
        let d_out = self.differential(p, q)?;
        let d_in = self.differential(p + 1, q - 1)?;
        let kernel = Rref::from_rows(f.clone(), n, d_out.rows().iter().cloned()).kernel_basis();
        let image = Rref::from_rows(f.clone(), n, d_in.transpose().rows().iter().cloned());
        let mut extra = Rref::empty(f.clone(), n);
        for v in &kernel {
            let red = image.reduce(&dense_to_sparse(&f, v));
            extra.insert(red);
        }
        let rep_pivots = extra.pivot_columns();
        let reps: Vec<SparseVec<F::Elem>> = extra.rows().cloned().collect();
        Ok(CohomologyBasis {
            p,
            q,
            field: f,
            chain_dim: n,
            image,
            reps,
            rep_pivots,
        })
    }
}

/// A basis of `K_{p,q}`: representatives in reduced echelon form with
/// pivots disjoint from those of the image.
#[derive(Clone, Debug)]
pub struct CohomologyBasis<F: Field> {
    pub p: usize,
    pub q: i32,
    field: F,
    chain_dim: usize,
    image: Rref<F>,
    reps: Vec<SparseVec<F::Elem>>,
    rep_pivots: Vec<usize>,
}

impl<F: Field> CohomologyBasis<F> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }
    pub fn chain_dim(&self) -> usize {
        self.chain_dim
    }
    pub fn representatives(&self) -> &[SparseVec<F::Elem>] {
        &self.reps
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_of(&self, cocycle: &[(usize, F::Elem)]) -> Vec<F::Elem> {
        let f = &self.field;
        let red = self.image.reduce(cocycle);
        let coords: Vec<F::Elem> = self
            .rep_pivots
            .iter()
            .map(|c| {
                red.binary_search_by_key(c, |(cc, _)| *cc)
                    .map(|i| red[i].1.clone())
                    .unwrap_or_else(|_| f.zero())
            })
            .collect();
        debug_assert!({
            let mut rest = red.clone();
            for (c, r) in coords.iter().zip(&self.reps) {
                rest = crate::linalg::axpy(f, &rest, &f.neg(c), r);
            }
            rest.is_empty()
        });
        coords
    }

    pub fn is_coboundary(&self, v: &[(usize, F::Elem)]) -> bool {
        self.image.reduce(v).is_empty()
    }
}

/// `k_{p,q}` with optional representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCell {
    pub p: usize,
    pub q: i32,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<Vec<(usize, String)>>>,
}

pub fn koszul_differential<F: Field>(module: &SectionModule<F>, p: usize, q: i32) -> Result<SparseMatrix<F>> {
    KoszulComplex::new(module).differential(p, q)
}

pub fn koszul_cohomology_dim<F: Field>(
    module: &SectionModule<F>,
    p: usize,
    q: i32,
    with_representatives: bool,
) -> Result<KoszulCell> {
    let cx = KoszulComplex::new(module);
    if !with_representatives {
        return Ok(KoszulCell {
            p,
            q,
            dim: cx.cohomology_dim(p, q)?,
            representatives: None,
        });
    }
    let basis = cx.cohomology_basis(p, q)?;
    let f = module.field();
    Ok(KoszulCell {
        p,
        q,
        dim: basis.dim(),
        representatives: Some(
            basis
                .representatives()
                .iter()
                .map(|r| r.iter().map(|(i, c)| (*i, f.format(c))).collect())
                .collect(),
        ),
    })
}

/// The array `k_{p,q}` for `0 ≤ p ≤ p_max`, `0 ≤ q ≤ q_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub model: String,
    pub kind: ModuleKind,
    pub twist: Twist,
    pub v_dim: usize,
    pub field: FieldDescriptor,
    pub p_max: usize,
    pub q_max: usize,
    /// `entries[q][p]`
    pub entries: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct CellTriple {
    p: usize,
    q: usize,
    dim: usize,
}

impl BettiTable {
    pub fn get(&self, p: usize, q: usize) -> Option<usize> {
        self.entries.get(q).and_then(|row| row.get(p)).copied()
    }

    /// Entry, or 0 where it vanishes for trivial reasons (`p > dim V`).
    pub fn get_or_trivial(&self, p: i64, q: i64) -> Option<usize> {
        if p < 0 || q < 0 || p as usize > self.v_dim {
            return Some(0);
        }
        self.get(p as usize, q as usize)
    }

    pub fn is_nonzero(&self, p: usize, q: usize) -> Option<bool> {
        self.get(p, q).map(|v| v > 0)
    }

    pub fn row_is_zero(&self, q: usize) -> bool {
        self.entries[q].iter().all(|&v| v == 0)
    }

    pub fn same_values(&self, other: &BettiTable) -> bool {
        self.entries == other.entries
    }

    /// Whether the `p`-range provably covers every nonzero cell: either it
    /// reaches `dim V`, or column `p_max` vanishes in every computed row.
    pub fn p_exhausted(&self) -> bool {
        self.p_max >= self.v_dim || self.entries.iter().all(|row| row[self.p_max] == 0)
    }

    /// Macaulay2-style grid; `?` marks the given cells.
    pub fn format_pretty(&self, undetermined: &[(usize, usize)]) -> String {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(self.p_max.to_string().len())
            .max(1);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} [{} {}, dim V = {}, over {}]",
            self.model,
            match self.kind {
                ModuleKind::CoordinateRing => "S/I",
                ModuleKind::Sections => "R",
            },
            self.twist,
            self.v_dim,
            self.field
        );
        let _ = write!(s, "{:>6}", "");
        for p in 0..=self.p_max {
            let _ = write!(s, " {:>width$}", p);
        }
        s.push('\n');
        let _ = write!(s, "{:>6}", "total:");
        for p in 0..=self.p_max {
            let t: usize = self.entries.iter().map(|row| row[p]).sum();
            let _ = write!(s, " {:>width$}", t);
        }
        s.push('\n');
        for (q, row) in self.entries.iter().enumerate() {
            let _ = write!(s, "{:>6}", format!("{q}:"));
            for (p, v) in row.iter().enumerate() {
                let cell = if undetermined.contains(&(p, q)) {
                    "?".to_string()
                } else if *v == 0 {
                    ".".to_string()
                } else {
                    v.to_string()
                };
                let _ = write!(s, " {:>width$}", cell);
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        let cells: Vec<CellTriple> = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().map(move |(p, &dim)| CellTriple { p, q, dim }))
            .collect();
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "model": self.model,
            "kind": self.kind,
            "twist": self.twist,
            "field": self.field,
            "v_dim": self.v_dim,
            "p_max": self.p_max,
            "q_max": self.q_max,
            "cells": cells,
        }))?)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,dim\n");
        for (q, row) in self.entries.iter().enumerate() {
            for (p, v) in row.iter().enumerate() {
                let _ = writeln!(s, "{p},{q},{v}");
            }
        }
        s
    }
}

/// Computes every cell of the window; all needed differential ranks are
/// computed in parallel first.
pub fn betti_table<F: Field>(
    module: &SectionModule<F>,
    model_label: &str,
    p_max: usize,
    q_max: usize,
) -> Result<BettiTable> {
    module.require(-1, q_max as i32 + 1)?;
    let cx = KoszulComplex::new(module);
    let mut needed: Vec<(usize, i32)> = Vec::new();
    for q in 0..=q_max as i32 {
        for p in 0..=p_max {
            needed.push((p, q));
            needed.push((p + 1, q - 1));
        }
    }
    needed.sort_unstable();
    needed.dedup();
    needed.retain(|&(p, _)| p <= cx.v_dim());
    let ranks: Vec<((usize, i32), Result<usize>)> = needed
        .par_iter()
        .map(|&(p, q)| ((p, q), cx.differential(p, q).map(|d| d.rank())))
        .collect();
    {
        let mut cache = cx.ranks.lock().unwrap();
        for (key, r) in ranks {
            cache.insert(key, r?);
        }
    }
    let mut entries = vec![vec![0usize; p_max + 1]; q_max + 1];
    for (q, row) in entries.iter_mut().enumerate() {
        for (p, slot) in row.iter_mut().enumerate() {
            *slot = if p > cx.v_dim() { 0 } else { cx.cohomology_dim(p, q as i32)? };
        }
    }
    Ok(BettiTable {
        model: model_label.to_string(),
        kind: module.kind(),
        twist: module.twist(),
        v_dim: module.v_dim(),
        field: module.field().descriptor(),
        p_max,
        q_max,
        entries,
    })
}

/// Default window `p_max = e + t + 1`, `q_max = 3`.
pub fn default_window(model: &EmbeddedModel) -> (usize, usize) {
    let md = model.metadata();
    (md.e + md.t + 1, 3)
}

/// Betti table of `S/I` with `V` all ambient linear forms.
pub fn coordinate_ring_table(
    model: &EmbeddedModel,
    field: FieldDescriptor,
    p_max: usize,
    q_max: usize,
) -> Result<BettiTable> {
    with_field!(field, |f| {
        let module = SectionModule::coordinate_ring(model, f, -1, q_max as i32 + 1)?;
        betti_table(&module, model.name(), p_max, q_max)
    })
}

/// Betti table of the section module `R(X, B, H)` with the model's `V`.
pub fn section_table(
    model: &EmbeddedModel,
    field: FieldDescriptor,
    twist: Twist,
    p_max: usize,
    q_max: usize,
) -> Result<BettiTable> {
    with_field!(field, |f| {
        let module = SectionModule::sections(model, f, twist, -1, q_max as i32 + 1)?;
        betti_table(&module, model.name(), p_max, q_max)
    })
}

/// `max{q : k_{p,q} ≠ 0}`. Requires a fully zero row above the last
/// nonzero one and an exhausted `p`-range; otherwise inconclusive.
pub fn regularity_from_table(table: &BettiTable) -> Result<usize> {
    let last = (0..=table.q_max).rev().find(|&q| !table.row_is_zero(q));
    let Some(last) = last else {
        return Err(Error::Inconclusive(format!("{}: table is identically zero", table.model)));
    };
    if last >= table.q_max {
        return Err(Error::Inconclusive(format!(
            "{}: row {last} is nonzero and no zero row above it was computed (q_max = {})",
            table.model, table.q_max
        )));
    }
    if !table.p_exhausted() {
        return Err(Error::Inconclusive(format!(
            "{}: column p = {} is nonzero; widen p_max",
            table.model, table.p_max
        )));
    }
    Ok(last)
}

/// `reg(X)` from the coordinate-ring table: module regularity plus one.
pub fn variety_regularity(table: &BettiTable) -> Result<usize> {
    if table.kind != ModuleKind::CoordinateRing {
        return Err(Error::InvalidParameter("regularity of X needs the S/I table".into()));
    }
    Ok(regularity_from_table(table)? + 1)
}

/// `h⁰(O_X(m)) − dim (S/I)_m`, the failure of `m`-normality.
pub fn m_normality_defect(model: &EmbeddedModel, field: FieldDescriptor, m: i32) -> Result<usize> {
    if m < 0 {
        return Err(Error::InvalidParameter(format!("degree {m} < 0")));
    }
    let full = with_field!(field, |f| {
        let module = SectionModule::sections(model, f, Twist::Zero, m, m)?;
        module.dim(m)?
    });
    let hf = model.hilbert_function(m as u32) as usize;
    full.checked_sub(hf).ok_or_else(|| {
        Error::Integrity(format!("{}: HF({m}) = {hf} exceeds h0 = {full}", model.name()))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NkOutcome {
    pub k: usize,
    pub holds: bool,
    pub first_failure: Option<(usize, usize)>,
}

/// `N_k`: `k_{0,q} = 0` for `q ≥ 1` and `k_{p,q} = 0` for `1 ≤ p ≤ k`,
/// `q ≥ 2`, within the table's window.
pub fn nk_property(table: &BettiTable, k: usize) -> Result<NkOutcome> {
    if table.twist != Twist::Zero {
        return Err(Error::InvalidParameter("N_k is defined for B = 0".into()));
    }
    if k > table.p_max && table.p_max < table.v_dim {
        return Err(Error::Inconclusive(format!("N_{k} needs p up to {k}, table stops at {}", table.p_max)));
    }
    for q in 1..=table.q_max {
        if table.entries[q][0] != 0 {
            return Ok(NkOutcome { k, holds: false, first_failure: Some((0, q)) });
        }
    }
    for p in 1..=k.min(table.p_max) {
        for q in 2..=table.q_max {
            if table.entries[q][p] != 0 {
                return Ok(NkOutcome { k, holds: false, first_failure: Some((p, q)) });
            }
        }
    }
    Ok(NkOutcome { k, holds: true, first_failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityRow {
    pub p: usize,
    pub k_p2: usize,
    pub dual_p: i64,
    pub k_dual0_canonical: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub model: String,
    pub field: FieldDescriptor,
    pub v_dim: usize,
    pub rows: Vec<DualityRow>,
    pub all_equal: bool,
}

/// Compares `k_{p,2}(C, V)` with `k_{r−1−p,0}(C, K_C, V)`, `r = dim P(V)`.
pub fn green_duality_check(model: &EmbeddedModel, field: FieldDescriptor) -> Result<DualityReport> {
    if model.metadata().n != 1 {
        return Err(Error::Unsupported(format!("{} is not a curve", model.name())));
    }
    if model.weierstrass().is_none() {
        return Err(Error::Unsupported(format!("no canonical basis for {}", model.name())));
    }
    let v = model.nvars();
    let p_max = v;
    let zero = section_table(model, field, Twist::Zero, p_max, 3)?;
    let canon = section_table(model, field, Twist::Canonical, p_max, 1)?;
    let r = v as i64 - 1;
    let rows: Vec<DualityRow> = (0..=p_max)
        .map(|p| {
            let dual_p = r - 1 - p as i64;
            let lhs = zero.get(p, 2).unwrap_or(0);
            let rhs = canon.get_or_trivial(dual_p, 0).unwrap_or(0);
            DualityRow {
                p,
                k_p2: lhs,
                dual_p,
                k_dual0_canonical: rhs,
                equal: lhs == rhs,
            }
        })
        .collect();
    Ok(DualityReport {
        model: model.name().to_string(),
        field,
        v_dim: v,
        all_equal: rows.iter().all(|r| r.equal),
        rows,
    })
}

/// Alternating sums at total degree `s`: chains versus cohomology, over
/// `0 ≤ p ≤ dim V`.
pub fn euler_characteristics<F: Field>(module: &SectionModule<F>, s: i32) -> Result<(i64, i64)> {
    let cx = KoszulComplex::new(module);
    let mut chains = 0i64;
    let mut cohom = 0i64;
    for p in 0..=cx.v_dim() {
        let q = s - p as i32;
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let c = if q < 0 { 0 } else { cx.chain_dim(p as i64, q)? };
        chains += sign * c as i64;
        if c > 0 {
            cohom += sign * cx.cohomology_dim(p, q)? as i64;
        }
    }
    Ok((chains, cohom))
}

/// Checks `d ∘ d = 0` for every composable pair in the window.
pub fn check_complex<F: Field>(module: &SectionModule<F>) -> Result<bool> {
    let cx = KoszulComplex::new(module);
    let (low, high) = module.window();
    for q in low..high - 1 {
        for p in 2..=cx.v_dim() {
            let a = cx.differential(p, q)?;
            let b = cx.differential(p - 1, q + 1)?;
            if !b.compose(&a)?.is_zero_matrix() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
