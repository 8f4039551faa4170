//! One-point isomorphic projections, the long exact sequence relating
//! `K(V)` and `K(W)`, evaluation matrices, corollary predictions and the
//! step-by-step resolution of a projected Betti table.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor, Rationals};
use crate::groebner::eliminate;
use crate::koszul::{betti_table, BettiTable, CohomologyBasis, KoszulComplex};
use crate::linalg::{Rref, SparseVec};
use crate::models::{random_coeff, rng_for, Construction, EmbeddedModel, Metadata, MAX_RESEEDS};
use crate::poly::PolyRing;
use crate::section::{SectionModule, Twist};
use crate::with_field;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// One projection `P(V) ⇢ P(W)` from the point `[v]`, `W = ker(ev_v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionStep {
    pub parent: String,
    /// Values of `v` on the parent's coordinates.
    pub functional: Vec<i64>,
    /// Last index with `v_k ≠ 0`.
    pub pivot: usize,
    /// Basis `u_j = v_k e_j − v_j e_k` of `W`, `j ≠ k`, in parent
    /// coordinates.
    pub w_basis: Vec<Vec<i64>>,
    pub seed: u64,
}

impl ProjectionStep {
    pub fn from_functional(parent: &str, functional: Vec<i64>, seed: u64) -> Result<Self> {
        let k = functional
            .iter()
            .rposition(|&c| c != 0)
            .ok_or_else(|| Error::InvalidParameter("zero functional".into()))?;
        let vk = functional[k];
        let w_basis = (0..functional.len())
            .filter(|&j| j != k)
            .map(|j| {
                let mut row = vec![0i64; functional.len()];
                row[j] = vk;
                row[k] -= functional[j];
                row
            })
            .collect();
        Ok(ProjectionStep {
            parent: parent.to_string(),
            functional,
            pivot: k,
            w_basis,
            seed,
        })
    }

    pub fn w_dim(&self) -> usize {
        self.w_basis.len()
    }
}

/// Ideal of the image of `X` in `P(W)`: change coordinates so that the
/// `W` basis becomes coordinates, then eliminate the remaining one.
fn projected_ideal(parent: &EmbeddedModel, step: &ProjectionStep) -> Vec<crate::models::RatPoly> {
    let n = parent.nvars();
    let k = step.pivot;
    let vk = rat(step.functional[k]);
    let ring = parent.ring(Rationals);
    // y_j = u_j for j ≠ k, y_k = x_k; so x_j = (y_j + v_j y_k)/v_k
    let images: Vec<_> = (0..n)
        .map(|j| {
            if j == k {
                ring.var(k)
            } else {
                let mut coeffs = vec![BigRational::zero(); n];
                coeffs[j] = rat(1) / &vk;
                coeffs[k] = rat(step.functional[j]) / &vk;
                ring.linear_form(&coeffs)
            }
        })
        .collect();
    let moved: Vec<_> = parent
        .generators()
        .iter()
        .map(|g| ring.substitute(g, &ring, &images))
        .collect();
    let kept = eliminate(&ring, &moved, &[k]);
    let child_ring = PolyRing::grevlex(Rationals, n - 1);
    let reindex: Vec<usize> = (0..n).map(|j| if j < k { j } else if j > k { j - 1 } else { usize::MAX }).collect();
    kept.iter()
        .map(|p| {
            child_ring.from_terms(
                p.terms()
                    .iter()
                    .map(|(m, c)| {
                        let mut e = vec![0u32; n - 1];
                        for j in 0..n {
                            if j != k {
                                e[reindex[j]] = m.exp(j);
                            }
                        }
                        (crate::poly::Monomial::from_exponents(&e), c.clone())
                    })
                    .collect(),
            )
        })
        .collect()
}

fn exponents_of_degree(n: usize, m: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if m == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in exponents_of_degree(n - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Images of the degree-`m` monomials of `Sym W` in piece `m`, built
/// from those of degree `m − 1`.
fn monomial_images<F: Field>(
    module: &SectionModule<F>,
    prev_monos: &[Vec<u32>],
    prev_images: &[Vec<F::Elem>],
    monos: &[Vec<u32>],
    m: u32,
) -> Result<Vec<Vec<F::Elem>>> {
    let index: BTreeMap<&Vec<u32>, usize> = prev_monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    monos
        .iter()
        .map(|e| {
            let j = e.iter().position(|&x| x > 0).expect("positive degree");
            let mut lower = e.clone();
            lower[j] -= 1;
            module.v_mult(j, m as i32 - 1)?.mul_dense(&prev_images[index[&lower]])
        })
        .collect()
}

fn image_rows<F: Field>(f: &F, images: &[Vec<F::Elem>], target_dim: usize) -> Vec<SparseVec<F::Elem>> {
    (0..target_dim)
        .map(|row| {
            images
                .iter()
                .enumerate()
                .filter(|(_, img)| !f.is_zero(&img[row]))
                .map(|(col, img)| (col, img[row].clone()))
                .collect()
        })
        .collect()
}

/// Degree-`m` multiples of the generators, as vectors over `monos`.
fn ideal_multiples<F: Field>(
    f: &F,
    gens: &[(u32, Vec<Vec<u32>>, Vec<BigRational>)],
    monos: &[Vec<u32>],
    m: u32,
) -> Result<Vec<SparseVec<F::Elem>>> {
    let nw = monos[0].len();
    let mono_index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut out = Vec::new();
    for (deg, gmonos, gcoeffs) in gens {
        for shift in exponents_of_degree(nw, m - deg) {
            let mut v = Vec::with_capacity(gmonos.len());
            for (gm, c) in gmonos.iter().zip(gcoeffs) {
                let e: Vec<u32> = gm.iter().zip(&shift).map(|(a, b)| a + b).collect();
                v.push((mono_index[&e], f.from_rational(c)?));
            }
            v.sort_by_key(|(i, _)| *i);
            out.push(v);
        }
    }
    Ok(out)
}

struct CurveImage {
    generators: Vec<crate::models::RatPoly>,
    /// Surjectivity of `Sym^m W → H⁰(O(m))` at `m = d − r + 1`, when it
    /// could be decided modulo a prime.
    surjective: Option<bool>,
}

/// Image ideal of a curve by linear algebra: in each degree `m` it is the
/// kernel of `Sym^m W → H⁰(O(m))`. Minimal generators lie in degrees at
/// most `d − r + 2` for a nondegenerate curve in `P^r`. Degrees without new
/// generators are recognised over a prime field: there the rank of the
/// lower-degree part can only drop and the kernel can only grow.
///
/// The same bound puts `d − r + 1` in the range where the Hilbert function
/// of the image equals its Hilbert polynomial, so the image has the
/// parent's Hilbert polynomial exactly when the map is onto there.
fn projected_curve_ideal(parent: &EmbeddedModel, step: &ProjectionStep) -> Result<CurveImage> {
    let q = Rationals;
    let fp = crate::field::PrimeField::default();
    let up = parent.subspace_in_root();
    let w_in_root: Vec<Vec<BigRational>> = step
        .w_basis
        .iter()
        .map(|row| {
            let mut out = vec![BigRational::zero(); up[0].len()];
            for (c, urow) in row.iter().zip(&up) {
                if *c == 0 {
                    continue;
                }
                for (o, u) in out.iter_mut().zip(urow) {
                    *o += rat(*c) * u;
                }
            }
            out
        })
        .collect();
    let nw = w_in_root.len();
    let r = nw as i64 - 1;
    let top = (parent.metadata().d as i64 - r + 2).max(2) as u32;
    let w_mod_p = w_in_root
        .iter()
        .map(|row| row.iter().map(|c| fp.from_rational(c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>();
    let module_p = match w_mod_p {
        Ok(basis) => SectionModule::sections_for(parent.root(), fp, Twist::Zero, 0, top as i32, basis).ok(),
        Err(_) => None,
    };
    let module_q = SectionModule::sections_for(parent.root(), q, Twist::Zero, 0, top as i32, w_in_root)?;
    let ring = PolyRing::grevlex(q, nw);
    let mut gens: Vec<(u32, Vec<Vec<u32>>, Vec<BigRational>)> = Vec::new();
    let mut prev_monos = vec![vec![0u32; nw]];
    let mut prev_q = vec![vec![q.one()]];
    let mut prev_p = vec![vec![fp.one()]];
    let mut q_current = true;
    let mut surjective = None;
    for m in 1..=top {
        let monos = exponents_of_degree(nw, m);
        if let Some(mp) = &module_p {
            let images_p = monomial_images(mp, &prev_monos, &prev_p, &monos, m)?;
            let rank_p = fp.rank_rows(image_rows(&fp, &images_p, mp.dim(m as i32)?), monos.len());
            if m + 1 == top && rank_p == mp.dim(m as i32)? {
                surjective = Some(true);
            }
            let lower_p = ideal_multiples(&fp, &gens, &monos, m).map(|rows| fp.rank_rows(rows, monos.len()));
            prev_p = images_p;
            if matches!(lower_p, Ok(l) if l == monos.len() - rank_p) {
                prev_monos = monos;
                q_current = false;
                continue;
            }
        }
        if !q_current {
            // rebuild the rational images up to degree m − 1
            let mut pm = vec![vec![0u32; nw]];
            let mut pi = vec![vec![q.one()]];
            for k in 1..m {
                let mk = exponents_of_degree(nw, k);
                pi = monomial_images(&module_q, &pm, &pi, &mk, k)?;
                pm = mk;
            }
            prev_q = pi;
        }
        let images = monomial_images(&module_q, &prev_monos, &prev_q, &monos, m)?;
        let kernel = crate::linalg::fraction_free_kernel(image_rows(&q, &images, module_q.dim(m as i32)?), monos.len());
        // independence modulo p implies independence over Q; if the selected
        // vectors fill the kernel modulo p the selection is complete
        let mut chosen = Vec::new();
        let mut complete = false;
        if let Ok(lower) = ideal_multiples(&fp, &gens, &monos, m) {
            let mut span = Rref::from_rows(fp, monos.len(), lower);
            for (i, kv) in kernel.iter().enumerate() {
                let vp: Vec<u32> = kv.iter().map(|c| fp.from_bigint(c)).collect();
                if span.insert(crate::linalg::dense_to_sparse(&fp, &vp)) {
                    chosen.push(i);
                }
            }
            complete = span.rank() == kernel.len();
        }
        if !complete {
            chosen.clear();
            let mut span = Rref::from_rows(q, monos.len(), ideal_multiples(&q, &gens, &monos, m)?);
            for (i, kv) in kernel.iter().enumerate() {
                let v: Vec<BigRational> = kv.iter().cloned().map(BigRational::from_integer).collect();
                if span.insert(crate::linalg::dense_to_sparse(&q, &v)) {
                    chosen.push(i);
                }
            }
        }
        for i in chosen {
            let (monos_of, coeffs): (Vec<Vec<u32>>, Vec<BigRational>) = kernel[i]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (monos[j].clone(), BigRational::from_integer(c.clone())))
                .unzip();
            gens.push((m, monos_of, coeffs));
        }
        prev_monos = monos;
        prev_q = images;
        q_current = true;
    }
    let generators = gens
        .into_iter()
        .map(|(_, monos, coeffs)| {
            ring.from_terms(
                monos
                    .iter()
                    .zip(coeffs)
                    .map(|(e, c)| (crate::poly::Monomial::from_exponents(e), c))
                    .collect(),
            )
        })
        .collect();
    Ok(CurveImage { generators, surjective })
}

/// Projects once from a seeded random point, reseeding until the Hilbert
/// polynomial of the image equals the parent's.
pub fn project_once(parent: &EmbeddedModel, seed: u64) -> Result<(EmbeddedModel, ProjectionStep)> {
    if parent.ambient() <= parent.metadata().n + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} is a hypersurface; no isomorphic projection exists",
            parent.name()
        )));
    }
    let target = parent.hilbert_polynomial()?;
    let mut last_reason = String::new();
    for attempt in 0..MAX_RESEEDS {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = rng_for(s);
        let mut v: Vec<i64> = (0..parent.nvars()).map(|_| random_coeff(&mut rng)).collect();
        if v.iter().all(|&c| c == 0) {
            v[0] = 1;
        }
        let step = ProjectionStep::from_functional(parent.name(), v, s)?;
        let (gens, surjective) = if parent.weierstrass().is_some() {
            let image = projected_curve_ideal(parent, &step)?;
            (image.generators, image.surjective)
        } else {
            (projected_ideal(parent, &step), None)
        };
        let md = parent.metadata();
        let depth = md.t + 1;
        let base = parent.root().name();
        let child = EmbeddedModel::assemble(
            format!("{base}|t={depth}"),
            Construction::Projection {
                functional: step.functional.clone(),
            },
            parent.ambient() - 1,
            gens,
            Metadata {
                n: md.n,
                d: md.d,
                e: md.e - 1,
                g: md.g,
                gonality: md.gonality,
                linearly_normal: false,
                t: depth,
            },
            parent.case(),
            Some(Box::new(parent.clone())),
            Some(
                step.w_basis
                    .iter()
                    .map(|row| row.iter().map(|c| rat(*c)).collect())
                    .collect(),
            ),
            Some(s),
        );
        if surjective == Some(true) {
            return Ok((child, step));
        }
        match child.hilbert_polynomial() {
            Ok(hp) if hp == target && child.hilbert_function(1) == child.nvars() as u64 => {
                return Ok((child, step))
            }
            Ok(hp) => last_reason = format!("seed {s}: image has Hilbert polynomial {hp}, expected {target}"),
            Err(e) => last_reason = format!("seed {s}: {e}"),
        }
    }
    Err(Error::GuardFailed {
        attempts: MAX_RESEEDS,
        reason: last_reason,
    })
}

/// Seed for step `i` of a chain started from `seed`.
pub fn step_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9))
}

/// Composes `t` one-point projections.
pub fn random_subspace(model: &EmbeddedModel, t: usize, seed: u64) -> Result<(EmbeddedModel, Vec<ProjectionStep>)> {
    if t == 0 {
        return Err(Error::InvalidParameter("codimension t must be at least 1".into()));
    }
    let mut current = model.clone();
    let mut steps = Vec::with_capacity(t);
    for i in 0..t {
        let (child, step) = project_once(&current, step_seed(seed, i)).map_err(|e| match e {
            Error::GuardFailed { attempts, reason } => Error::GuardFailed {
                attempts,
                reason: format!("projection step {} of {t}: {reason}", i + 1),
            },
            other => other,
        })?;
        steps.push(step);
        current = child;
    }
    Ok((current, steps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesViolation {
    pub cell: (usize, usize),
    pub inequality: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesReport {
    pub checked: usize,
    pub violations: Vec<LesViolation>,
}

/// Checks the rank inequalities given by exactness of
/// `K_{p,q}(W) → K_{p,q}(V) → K_{p−1,q}(W) → K_{p−1,q+1}(W)` at every cell
/// whose neighbours are inside both windows.
pub fn les_consistency(parent: &BettiTable, child: &BettiTable) -> Result<LesReport> {
    if parent.field != child.field || parent.twist != child.twist {
        return Err(Error::InvalidParameter("tables differ in field or twist".into()));
    }
    if child.v_dim + 1 != parent.v_dim {
        return Err(Error::InvalidParameter("child V must have codimension 1".into()));
    }
    let v = |p: i64, q: i64| parent.get_or_trivial(p, q);
    let w = |p: i64, q: i64| child.get_or_trivial(p, q);
    let mut checked = 0;
    let mut violations = Vec::new();
    let pm = parent.p_max.max(child.p_max) as i64;
    let qm = parent.q_max.min(child.q_max) as i64;
    for q in 0..=qm {
        for p in 0..=pm {
            // exactness at K_{p,q}(V)
            if let (Some(a), Some(b), Some(c)) = (v(p, q), w(p, q), w(p - 1, q)) {
                checked += 1;
                if a > b + c {
                    violations.push(LesViolation {
                        cell: (p as usize, q as usize),
                        inequality: format!("k^V_{{{p},{q}}} = {a} > k^W_{{{p},{q}}} + k^W_{{{},{q}}} = {}", p - 1, b + c),
                    });
                }
            }
            // exactness at K_{p−1,q}(W)
            if let (Some(a), Some(b), Some(c)) = (w(p - 1, q), v(p, q), w(p - 1, q + 1)) {
                checked += 1;
                if a > b + c {
                    violations.push(LesViolation {
                        cell: (p as usize, q as usize),
                        inequality: format!("k^W_{{{},{q}}} = {a} > k^V_{{{p},{q}}} + k^W_{{{},{}}} = {}", p - 1, p - 1, q + 1, b + c),
                    });
                }
            }
            // exactness at K_{p,q}(W), entered from K_{p,q−1}(W)
            if let (Some(a), Some(b), Some(c)) = (w(p, q), w(p, q - 1), v(p, q)) {
                checked += 1;
                if a > b + c {
                    violations.push(LesViolation {
                        cell: (p as usize, q as usize),
                        inequality: format!("k^W_{{{p},{q}}} = {a} > k^W_{{{p},{}}} + k^V_{{{p},{q}}} = {}", q - 1, b + c),
                    });
                }
            }
        }
    }
    Ok(LesReport { checked, violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Zero,
    Nonzero,
    Undetermined,
}

impl CellStatus {
    pub fn of(dim: usize) -> Self {
        if dim == 0 {
            CellStatus::Zero
        } else {
            CellStatus::Nonzero
        }
    }
}

/// Rule behind a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "Cor3.5")]
    LongExactSequence,
    #[serde(rename = "Cor3.7")]
    EvaluationRowOne,
    #[serde(rename = "Cor3.9")]
    EvaluationRowZero,
    #[serde(rename = "duality")]
    Duality,
    #[serde(rename = "row-zero")]
    RowZero,
    #[serde(rename = "nonlinear-normal")]
    NonLinearlyNormal,
    #[serde(rename = "none")]
    NoRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corollary {
    /// Nonvanishing/vanishing through the long exact sequence.
    Les,
    /// Evaluation-map criterion in weight 1.
    EvaluationRowOne,
    /// Evaluation-map criterion in weight 0.
    EvaluationRowZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub status: CellStatus,
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Prediction {
    fn none() -> Self {
        Prediction {
            status: CellStatus::Undetermined,
            rule: Rule::NoRule,
            note: None,
        }
    }
    fn by(status: CellStatus, rule: Rule) -> Self {
        Prediction { status, rule, note: None }
    }
}

/// Statuses of child cells known before the prediction (used to test the
/// vanishing hypothesis of the long-exact-sequence corollary).
#[derive(Clone, Debug, Default)]
pub struct KnownCells {
    cells: BTreeMap<(i64, i64), bool>,
    /// Rows `q < 0` and columns `p > dim W` vanish identically.
    w_dim: usize,
}

impl KnownCells {
    pub fn new(w_dim: usize) -> Self {
        KnownCells {
            cells: BTreeMap::new(),
            w_dim,
        }
    }

    /// Row 0 of `R(X, O, H)`: `K_{0,0} = k`, `K_{p,0} = 0` for `p ≥ 1`.
    pub fn with_structural_row_zero(mut self) -> Self {
        for p in 0..=self.w_dim as i64 {
            self.cells.insert((p, 0), p == 0);
        }
        self
    }

    /// Every cell of a directly computed table.
    pub fn from_table(table: &BettiTable) -> Self {
        let mut k = KnownCells::new(table.v_dim);
        for (q, row) in table.entries.iter().enumerate() {
            for (p, &v) in row.iter().enumerate() {
                k.cells.insert((p as i64, q as i64), v > 0);
            }
        }
        k
    }

    pub fn set(&mut self, p: i64, q: i64, nonzero: bool) {
        self.cells.insert((p, q), nonzero);
    }

    pub fn get(&self, p: i64, q: i64) -> Option<bool> {
        if q < 0 || p < 0 || p as usize > self.w_dim {
            return Some(false);
        }
        self.cells.get(&(p, q)).copied()
    }

    /// `K_{i,j} = 0` for all `i ≥ p_min`, `j ≤ q_max`.
    fn vanish_from(&self, p_min: i64, q_max: i64) -> bool {
        (0..=q_max).all(|j| (p_min.max(0)..=self.w_dim as i64).all(|i| self.get(i, j) == Some(false)))
    }
}

/// Rank data of the evaluation matrix at the projection centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvGate {
    pub rank_at_center: usize,
    pub generic_rank: usize,
    pub rows: usize,
}

impl EvGate {
    pub fn center_is_general(&self) -> bool {
        self.rank_at_center == self.generic_rank
    }
}

/// Predicts the child cell `K_{p,q}(W)` from the parent table.
///
/// For the evaluation criteria the zero conclusion needs a general centre.
/// It is granted only through `gate`: `K_{p,q}(W) = 0` exactly when `ev_v`
/// is injective, so a full rank at the centre gives zero and a deficient
/// rank gives nonzero. Without a gate only the inequality part applies.
pub fn corollary_predict(
    parent: &BettiTable,
    known: &KnownCells,
    which: Corollary,
    p: usize,
    q: usize,
    gate: Option<EvGate>,
) -> Prediction {
    let pi = p as i64;
    let qi = q as i64;
    match which {
        Corollary::Les => {
            // (1) applied at p+1: K_{p+1,q}(V) ≠ 0 ⇒ K_{p,q}(W) ≠ 0
            if let Some(v) = parent.get_or_trivial(pi + 1, qi) {
                if v > 0 && known.vanish_from(pi, qi - 1) {
                    return Prediction::by(CellStatus::Nonzero, Rule::LongExactSequence);
                }
            }
            // (2): K_{p,q}(V) = 0 ⇒ K_{p,q}(W) = 0
            if let Some(v) = parent.get_or_trivial(pi, qi) {
                if v == 0 && known.vanish_from(pi - 1, qi - 1) {
                    return Prediction::by(CellStatus::Zero, Rule::LongExactSequence);
                }
            }
            Prediction::none()
        }
        Corollary::EvaluationRowOne | Corollary::EvaluationRowZero => {
            let (rule, row, p_min) = match which {
                Corollary::EvaluationRowOne => (Rule::EvaluationRowOne, 1usize, 2usize),
                _ => (Rule::EvaluationRowZero, 0usize, 1usize),
            };
            if q != row || p < p_min {
                return Prediction::none();
            }
            // weight-1 criterion needs K_{i,0}(V) = 0 for i ≥ 1
            if row == 1 && (1..=parent.p_max).any(|i| parent.get(i, 0) != Some(0)) {
                return Prediction::none();
            }
            let (Some(lo), Some(hi)) = (parent.get(p - 1, row), parent.get(p, row)) else {
                return Prediction::none();
            };
            if lo < hi {
                return Prediction::by(CellStatus::Nonzero, rule);
            }
            if hi == 0 {
                return Prediction::none();
            }
            match gate {
                None => Prediction {
                    status: CellStatus::Undetermined,
                    rule,
                    note: Some("generality of W not certified".into()),
                },
                Some(g) if g.rank_at_center == hi => Prediction::by(CellStatus::Zero, rule),
                Some(g) => Prediction {
                    status: CellStatus::Nonzero,
                    rule,
                    note: Some(format!(
                        "ev_v has rank {} < {hi} at the centre (generic rank {}); not injective",
                        g.rank_at_center, g.generic_rank
                    )),
                },
            }
        }
    }
}

/// `H⁰(ev)`: entry `(a, b)` is `Σ_i c_{a,b,i} x_i`, the `b`-coordinate of
/// the class of `ι_{e_i*}(α_a)`.
#[derive(Clone, Debug)]
pub struct EvMatrix<F: Field> {
    pub p: usize,
    pub q: i32,
    pub twist: Twist,
    field: F,
    nvars: usize,
    /// `coeffs[a][b][i]`
    coeffs: Vec<Vec<Vec<F::Elem>>>,
    cols: usize,
}

impl<F: Field> EvMatrix<F> {
    pub fn shape(&self) -> (usize, usize) {
        (self.coeffs.len(), self.cols)
    }

    pub fn entry(&self, a: usize, b: usize) -> &[F::Elem] {
        &self.coeffs[a][b]
    }

    pub fn is_linear(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.len() == self.nvars)
    }

    /// Matrix of `ev_v : K_{p,q} → K_{p−1,q}` in the representative bases,
    /// rows indexed by the target.
    pub fn evaluate(&self, v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut out = vec![vec![f.zero(); self.coeffs.len()]; self.cols];
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, form) in row.iter().enumerate() {
                let mut acc = f.zero();
                for (c, x) in form.iter().zip(v) {
                    acc = f.add(&acc, &f.mul(c, x));
                }
                out[b][a] = acc;
            }
        }
        out
    }

    pub fn rank_at(&self, v: &[F::Elem]) -> usize {
        let dense = self.evaluate(v);
        rank_dense(&self.field, &dense, self.coeffs.len())
    }

    /// Max rank over `samples` seeded random evaluations.
    pub fn generic_rank(&self, seed: u64, samples: usize) -> usize {
        let mut rng = rng_for(seed);
        (0..samples)
            .map(|_| {
                let v: Vec<F::Elem> = (0..self.nvars).map(|_| self.field.from_i64(random_coeff(&mut rng))).collect();
                self.rank_at(&v)
            })
            .max()
            .unwrap_or(0)
    }

    /// Injectivity of `H⁰(ev) : K_{p,q} → V ⊗ K_{p−1,q}` as a linear map.
    pub fn scalar_injective(&self) -> bool {
        let f = &self.field;
        let rows: Vec<Vec<F::Elem>> = (0..self.cols * self.nvars)
            .map(|bi| {
                let (b, i) = (bi / self.nvars, bi % self.nvars);
                self.coeffs.iter().map(|row| row[b][i].clone()).collect()
            })
            .collect();
        rank_dense(f, &rows, self.coeffs.len()) == self.coeffs.len()
    }

    pub fn format_entries(&self) -> Vec<Vec<String>> {
        let f = &self.field;
        let ring = PolyRing::grevlex(f.clone(), self.nvars);
        self.coeffs
            .iter()
            .map(|row| row.iter().map(|form| ring.format(&ring.linear_form(form))).collect())
            .collect()
    }
}

fn rank_dense<F: Field>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> usize {
    let sparse: Vec<SparseVec<F::Elem>> = rows.iter().map(|r| crate::linalg::dense_to_sparse(f, r)).collect();
    f.rank_rows(sparse, ncols)
}

/// `ι_{e_i*}` on `Λ^p V ⊗ M_q`.
fn contract<F: Field>(cx: &KoszulComplex<F>, p: usize, q: i32, coeffs: &[F::Elem], vec: &[(usize, F::Elem)]) -> Result<SparseVec<F::Elem>> {
    let f = cx.module().field();
    let mq = cx.module().dim(q)?;
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (idx, c) in vec {
        let (w, k) = (idx / mq, idx % mq);
        let wedge = &cx.wedges(p)[w];
        for (j, &i) in wedge.iter().enumerate() {
            if f.is_zero(&coeffs[i]) {
                continue;
            }
            let mut rest = wedge.clone();
            rest.remove(j);
            let b = cx.wedge_position(p - 1, &rest).expect("wedge");
            let mut val = f.mul(c, &coeffs[i]);
            if (j + 1) % 2 == 1 {
                val = f.neg(&val);
            }
            let slot = acc.entry(b * mq + k).or_insert_with(|| f.zero());
            *slot = f.add(slot, &val);
        }
    }
    Ok(acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect())
}

fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    (0..n).map(|j| if j == i { f.one() } else { f.zero() }).collect()
}

pub fn build_ev_matrix_from<F: Field>(
    cx: &KoszulComplex<F>,
    source: &CohomologyBasis<F>,
    target: &CohomologyBasis<F>,
) -> Result<EvMatrix<F>> {
    let f = cx.module().field().clone();
    let n = cx.v_dim();
    if source.p == 0 || target.p + 1 != source.p || target.q != source.q {
        return Err(Error::InvalidParameter("ev matrix needs cells (p,q) and (p−1,q)".into()));
    }
    let (p, q) = (source.p, source.q);
    let mut coeffs = Vec::with_capacity(source.dim());
    for alpha in source.representatives() {
        let mut row = vec![vec![f.zero(); n]; target.dim()];
        for i in 0..n {
            let img = contract(cx, p, q, &unit(&f, n, i), alpha)?;
            let cls = target.class_of(&img);
            for (b, c) in cls.into_iter().enumerate() {
                row[b][i] = c;
            }
        }
        coeffs.push(row);
    }
    Ok(EvMatrix {
        p,
        q,
        twist: cx.module().twist(),
        field: f,
        nvars: n,
        coeffs,
        cols: target.dim(),
    })
}

/// Builds the evaluation matrix for `(p, q)` on a module.
pub fn build_ev_matrix<F: Field>(module: &SectionModule<F>, p: usize, q: i32) -> Result<EvMatrix<F>> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let cx = KoszulComplex::new(module);
    let source = cx.cohomology_basis(p, q)?;
    let target = cx.cohomology_basis(p - 1, q)?;
    build_ev_matrix_from(&cx, &source, &target)
}

/// `Λ^m W → Λ^m V` for `W` spanned by the rows of `u`, tensored with the
/// identity of `M_q`: returns, per `W`-wedge, the sparse image over
/// `V`-wedges.
fn wedge_inclusion<F: Field>(f: &F, cx_v: &KoszulComplex<F>, m: usize, w_wedges: &[Vec<usize>], u: &[Vec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    w_wedges
        .iter()
        .map(|wedge| {
            // expand u_{j1} ∧ … ∧ u_{jm} term by term
            let mut acc: BTreeMap<Vec<usize>, F::Elem> = BTreeMap::new();
            acc.insert(Vec::new(), f.one());
            for &j in wedge {
                let mut next: BTreeMap<Vec<usize>, F::Elem> = BTreeMap::new();
                for (set, c) in &acc {
                    for (i, ui) in u[j].iter().enumerate() {
                        if f.is_zero(ui) || set.contains(&i) {
                            continue;
                        }
                        let after = set.iter().filter(|&&s| s > i).count();
                        let mut val = f.mul(c, ui);
                        if after % 2 == 1 {
                            val = f.neg(&val);
                        }
                        let mut ns = set.clone();
                        let pos = ns.partition_point(|&s| s < i);
                        ns.insert(pos, i);
                        let slot = next.entry(ns).or_insert_with(|| f.zero());
                        *slot = f.add(slot, &val);
                    }
                }
                next.retain(|_, v| !f.is_zero(v));
                acc = next;
            }
            let mut out: SparseVec<F::Elem> = acc
                .into_iter()
                .map(|(set, c)| (cx_v.wedge_position(m, &set).expect("wedge"), c))
                .collect();
            out.sort_by_key(|(i, _)| *i);
            out
        })
        .collect()
}

fn apply_inclusion<F: Field>(
    f: &F,
    incl: &[SparseVec<F::Elem>],
    mq: usize,
    vec: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (idx, c) in vec {
        let (w, k) = (idx / mq, idx % mq);
        for (vi, a) in &incl[w] {
            let slot = acc.entry(vi * mq + k).or_insert_with(|| f.zero());
            *slot = f.add(slot, &f.mul(a, c));
        }
    }
    acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
}

/// Solves `incl · β = target` for `β` over `Λ^m W ⊗ M_q`; `None` when the
/// target is outside the image.
fn solve_through_inclusion<F: Field>(
    f: &F,
    incl: &[SparseVec<F::Elem>],
    n_vwedges: usize,
    mq: usize,
    target: &[(usize, F::Elem)],
) -> Option<SparseVec<F::Elem>> {
    let nw = incl.len();
    // rows of the augmented system [A | B], A = incl as columns
    let mut rows: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); n_vwedges];
    for (w, col) in incl.iter().enumerate() {
        for (vi, a) in col {
            rows[*vi].push((w, a.clone()));
        }
    }
    for (idx, c) in target {
        let (vi, k) = (idx / mq, idx % mq);
        rows[vi].push((nw + k, c.clone()));
    }
    for r in rows.iter_mut() {
        r.sort_by_key(|(i, _)| *i);
    }
    let rref = Rref::from_rows(f.clone(), nw + mq, rows);
    let pivots = rref.pivot_columns();
    if pivots.iter().any(|&c| c >= nw) {
        return None;
    }
    let mut out: Vec<(usize, F::Elem)> = Vec::new();
    for (c, row) in pivots.iter().zip(rref.rows()) {
        for (j, v) in row {
            if *j >= nw {
                out.push((c * mq + (j - nw), v.clone()));
            }
        }
    }
    out.sort_by_key(|(i, _)| *i);
    Some(out)
}

/// Result of checking `incl ∘ pr_v = ev_v` on classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramCheck {
    pub p: usize,
    pub q: i32,
    pub commutes: bool,
    pub k_v: usize,
    pub k_w_target: usize,
}

/// Checks that `K_{p,q}(V) → K_{p−1,q}(W) → K_{p−1,q}(V)` equals `ev_v`
/// as matrices in representative bases.
pub fn diagram_commutes<F: Field>(
    parent: &SectionModule<F>,
    child: &SectionModule<F>,
    functional: &[F::Elem],
    w_basis: &[Vec<F::Elem>],
    p: usize,
    q: i32,
) -> Result<DiagramCheck> {
    let f = parent.field().clone();
    let cx_v = KoszulComplex::new(parent);
    let cx_w = KoszulComplex::new(child);
    let src = cx_v.cohomology_basis(p, q)?;
    let tgt_v = cx_v.cohomology_basis(p - 1, q)?;
    let tgt_w = cx_w.cohomology_basis(p - 1, q)?;
    let mq = parent.dim(q)?;
    let incl = wedge_inclusion(&f, &cx_v, p - 1, cx_w.wedges(p - 1), w_basis);
    let n_vwedges = cx_v.wedges(p - 1).len();

    let incl_cols: Vec<Vec<F::Elem>> = tgt_w
        .representatives()
        .iter()
        .map(|gamma| tgt_v.class_of(&apply_inclusion(&f, &incl, mq, gamma)))
        .collect();

    let mut commutes = true;
    for alpha in src.representatives() {
        let iota = contract(&cx_v, p, q, functional, alpha)?;
        let ev_col = tgt_v.class_of(&iota);
        let beta = solve_through_inclusion(&f, &incl, n_vwedges, mq, &iota)
            .ok_or_else(|| Error::Integrity("ι_v(α) is not in the image of Λ W".into()))?;
        let pr_col = tgt_w.class_of(&beta);
        // incl · pr
        let mut composed = vec![f.zero(); tgt_v.dim()];
        for (c, col) in pr_col.iter().zip(&incl_cols) {
            for (slot, x) in composed.iter_mut().zip(col) {
                *slot = f.add(slot, &f.mul(c, x));
            }
        }
        if composed != ev_col {
            commutes = false;
        }
    }
    Ok(DiagramCheck {
        p,
        q,
        commutes,
        k_v: src.dim(),
        k_w_target: tgt_w.dim(),
    })
}

/// Sections table over a chosen module range, shared by the procedures.
fn tables_for(model: &EmbeddedModel, field: FieldDescriptor, twist: Twist, p_max: usize, q_max: usize) -> Result<BettiTable> {
    crate::koszul::section_table(model, field, twist, p_max, q_max)
}

/// Evaluation gate at the centre of `step` for cell `(p, q)` of the
/// parent's module.
pub fn ev_gate(
    parent: &EmbeddedModel,
    field: FieldDescriptor,
    twist: Twist,
    step: &ProjectionStep,
    p: usize,
    q: i32,
) -> Result<EvGate> {
    with_field!(field, |f| {
        let module = SectionModule::sections(parent, f.clone(), twist, q - 1, q + 1)?;
        let ev = build_ev_matrix(&module, p, q)?;
        let v: Vec<_> = step.functional.iter().map(|c| f.from_i64(*c)).collect();
        Ok(EvGate {
            rank_at_center: ev.rank_at(&v),
            generic_rank: ev.generic_rank(step.seed ^ 0x5EED, 5),
            rows: ev.shape().0,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub step: usize,
    pub cell: (usize, usize),
    pub predicted: CellStatus,
    pub computed: CellStatus,
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<Rule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSummary {
    pub step: usize,
    pub seed: u64,
    pub parent: String,
    pub child_ambient: usize,
    pub parent_table: BettiTable,
    pub child_table: BettiTable,
    pub undetermined: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureReport {
    pub model: String,
    pub field: FieldDescriptor,
    pub t: usize,
    pub seed_chain: Vec<u64>,
    pub steps: Vec<StepSummary>,
    pub entries: Vec<ReportEntry>,
}

impl ProcedureReport {
    /// Cells of the final child still undetermined after the last step.
    pub fn final_undetermined(&self) -> Vec<(usize, usize)> {
        self.steps.last().map(|s| s.undetermined.clone()).unwrap_or_default()
    }
}

/// Resolves rows 1 and 2 of each projected table from its parent, one
/// point at a time, checking every prediction against the directly
/// computed table. A contradiction is a hard error.
pub fn resolution_procedure(
    model: &EmbeddedModel,
    t: usize,
    seed: u64,
    field: FieldDescriptor,
) -> Result<(EmbeddedModel, ProcedureReport)> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let (child, _) = random_subspace(model, t, seed)?;
    let report = resolve_lineage(&child, field)?;
    Ok((child, report))
}

/// Runs the resolution along the recorded projection chain of `model`.
pub fn resolve_lineage(model: &EmbeddedModel, field: FieldDescriptor) -> Result<ProcedureReport> {
    let lineage = model.lineage();
    let first = lineage
        .iter()
        .position(|m| matches!(m.construction(), Construction::Projection { .. }))
        .ok_or_else(|| Error::InvalidParameter(format!("{} is not a projection", model.name())))?;
    let mut entries = Vec::new();
    let mut steps = Vec::new();
    for (i, pair) in lineage[first - 1..].windows(2).enumerate() {
        let (parent, child) = (pair[0], pair[1]);
        let Construction::Projection { functional } = child.construction() else {
            return Err(Error::InvalidParameter(format!("{} is not a projection", child.name())));
        };
        let step = ProjectionStep::from_functional(parent.name(), functional.clone(), child.seed().unwrap_or(0))?;
        let (summary, mut step_entries) = resolve_step(parent, child, &step, i + 1, field)?;
        entries.append(&mut step_entries);
        steps.push(summary);
    }
    Ok(ProcedureReport {
        model: lineage[first - 1].name().to_string(),
        field,
        t: steps.len(),
        seed_chain: model.seed_chain(),
        steps,
        entries,
    })
}

fn resolve_step(
    parent: &EmbeddedModel,
    child: &EmbeddedModel,
    step: &ProjectionStep,
    step_no: usize,
    field: FieldDescriptor,
) -> Result<(StepSummary, Vec<ReportEntry>)> {
    let n_v = parent.nvars();
    let n_w = child.nvars();
    let p_max = n_v;
    let parent_o = tables_for(parent, field, Twist::Zero, p_max, 3)?;
    let child_o = tables_for(child, field, Twist::Zero, p_max, 3)?;
    let canonical = parent.metadata().n == 1 && parent.weierstrass().is_some();

    let mut entries = Vec::new();
    let mut undetermined = Vec::new();
    let mut record = |cell: (usize, usize), pred: &Prediction, via: Option<Rule>, computed: CellStatus| -> Result<()> {
        if pred.status != CellStatus::Undetermined && pred.status != computed {
            return Err(Error::Contradiction(format!(
                "step {step_no} (seed {}), cell {:?}: predicted {:?} by {:?}{} but computed {:?}",
                step.seed,
                cell,
                pred.status,
                pred.rule,
                via.map(|v| format!(" via {v:?}")).unwrap_or_default(),
                computed
            )));
        }
        if pred.status == CellStatus::Undetermined {
            undetermined.push(cell);
        }
        entries.push(ReportEntry {
            step: step_no,
            cell,
            predicted: pred.status,
            computed,
            rule: pred.rule,
            via,
            note: pred.note.clone(),
            seed: step.seed,
        });
        Ok(())
    };

    // row 0 is structural
    let known = KnownCells::new(n_w).with_structural_row_zero();
    for p in 0..n_w {
        let pred = Prediction::by(if p == 0 { CellStatus::Nonzero } else { CellStatus::Zero }, Rule::RowZero);
        record((p, 0), &pred, None, CellStatus::of(child_o.get(p, 0).unwrap_or(0)))?;
    }

    // row 1
    let mut known1 = known.clone();
    let last_nonzero = (0..=parent_o.p_max).rev().find(|&p| parent_o.get(p, 1).unwrap_or(0) > 0);
    for p in 0..n_w {
        let computed = CellStatus::of(child_o.get(p, 1).unwrap_or(0));
        let pred = if p == 0 {
            Prediction::by(CellStatus::Nonzero, Rule::NonLinearlyNormal)
        } else {
            let les = corollary_predict(&parent_o, &known, Corollary::Les, p, 1, None);
            if les.status != CellStatus::Undetermined {
                les
            } else if p >= 2 && Some(p) == last_nonzero {
                let gate = ev_gate(parent, field, Twist::Zero, step, p, 1)?;
                corollary_predict(&parent_o, &known, Corollary::EvaluationRowOne, p, 1, Some(gate))
            } else {
                corollary_predict(&parent_o, &known, Corollary::EvaluationRowOne, p, 1, None)
            }
        };
        if pred.status != CellStatus::Undetermined {
            known1.set(p as i64, 1, pred.status == CellStatus::Nonzero);
        }
        record((p, 1), &pred, None, computed)?;
    }

    // row 2 through duality with the canonical twist
    if canonical {
        let parent_k = tables_for(parent, field, Twist::Canonical, p_max, 1)?;
        let child_k = tables_for(child, field, Twist::Canonical, p_max, 1)?;
        let known_k = KnownCells::new(n_w);
        let r_w = n_w as i64 - 1;
        let last_k = (0..=parent_k.p_max).rev().find(|&p| parent_k.get(p, 0).unwrap_or(0) > 0);
        for p in 0..n_w {
            let dual = r_w - 1 - p as i64;
            let computed = CellStatus::of(child_o.get(p, 2).unwrap_or(0));
            let pred = if dual < 0 {
                // K_{dual,0} with dual < 0 vanishes
                Prediction::by(CellStatus::Zero, Rule::Duality)
            } else {
                let d = dual as usize;
                let base = if d == 0 {
                    // K_{0,0}(K_C, W) = H⁰(K_C) ≠ 0 for g ≥ 1
                    Prediction::by(CellStatus::Nonzero, Rule::RowZero)
                } else {
                    let les = corollary_predict(&parent_k, &known_k, Corollary::Les, d, 0, None);
                    if les.status != CellStatus::Undetermined {
                        les
                    } else if Some(d) == last_k {
                        let gate = ev_gate(parent, field, Twist::Canonical, step, d, 0)?;
                        corollary_predict(&parent_k, &known_k, Corollary::EvaluationRowZero, d, 0, Some(gate))
                    } else {
                        corollary_predict(&parent_k, &known_k, Corollary::EvaluationRowZero, d, 0, None)
                    }
                };
                // the dual cell itself is also checked on the canonical table
                let k_computed = CellStatus::of(child_k.get(d, 0).unwrap_or(0));
                if base.status != CellStatus::Undetermined && base.status != k_computed {
                    return Err(Error::Contradiction(format!(
                        "step {step_no}: canonical cell ({d},0) predicted {:?} by {:?}, computed {:?}",
                        base.status, base.rule, k_computed
                    )));
                }
                base
            };
            let via = if pred.rule == Rule::Duality { None } else { Some(pred.rule) };
            let shown = Prediction {
                status: pred.status,
                rule: Rule::Duality,
                note: pred.note.clone(),
            };
            record((p, 2), &shown, via, computed)?;
        }
    } else {
        for p in 0..n_w {
            let computed = CellStatus::of(child_o.get(p, 2).unwrap_or(0));
            let pred = corollary_predict(&parent_o, &known1, Corollary::Les, p, 2, None);
            record((p, 2), &pred, None, computed)?;
        }
    }

    Ok((
        StepSummary {
            step: step_no,
            seed: step.seed,
            parent: parent.name().to_string(),
            child_ambient: child.ambient(),
            parent_table: parent_o,
            child_table: child_o,
            undetermined,
        },
        entries,
    ))
}

/// Child section table computed directly, for callers that only need it.
pub fn child_section_table(child: &EmbeddedModel, field: FieldDescriptor, twist: Twist, p_max: usize, q_max: usize) -> Result<BettiTable> {
    with_field!(field, |f| {
        let module = SectionModule::sections(child, f, twist, -1, q_max as i32 + 1)?;
        betti_table(&module, child.name(), p_max, q_max)
    })
}

/// `W` basis and functional of the step over a field.
pub fn step_over<F: Field>(f: &F, step: &ProjectionStep) -> (Vec<F::Elem>, Vec<Vec<F::Elem>>) {
    (
        step.functional.iter().map(|c| f.from_i64(*c)).collect(),
        step.w_basis.iter().map(|row| row.iter().map(|c| f.from_i64(*c)).collect()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::models;

    #[test]
    fn zero_codimension_rejected() {
        let e = models::elliptic_normal_curve(5).unwrap();
        assert!(random_subspace(&e, 0, 1).is_err());
    }

    #[test]
    fn functional_basis() {
        let s = ProjectionStep::from_functional("x", vec![2, 3, 0], 0).unwrap();
        assert_eq!(s.pivot, 1);
        assert_eq!(s.w_basis, vec![vec![3, -2, 0], vec![0, 0, 3]]);
    }

    #[test]
    fn quintic_projection_and_diagram() {
        let e = models::elliptic_normal_curve(5).unwrap();
        let (child, step) = project_once(&e, 7).unwrap();
        assert_eq!(child.ambient(), 3);
        assert_eq!(child.metadata().t, 1);
        let f = PrimeField::default();
        let pm = SectionModule::sections(&e, f, Twist::Zero, -1, 3).unwrap();
        let cm = SectionModule::sections(&child, f, Twist::Zero, -1, 3).unwrap();
        let (v, u) = step_over(&f, &step);
        for (p, q) in [(2usize, 1i32), (1, 1), (3, 2)] {
            assert!(diagram_commutes(&pm, &cm, &v, &u, p, q).unwrap().commutes);
        }
    }

    #[test]
    fn kernel_ideal_matches_elimination() {
        let e = models::elliptic_normal_curve(5).unwrap();
        let step = ProjectionStep::from_functional(e.name(), vec![3, -1, 4, 1, -5], 0).unwrap();
        let by_kernel = projected_curve_ideal(&e, &step).unwrap();
        assert_eq!(by_kernel.surjective, Some(true));
        let by_elim = projected_ideal(&e, &step);
        let ring = PolyRing::grevlex(Rationals, 4);
        let a = crate::groebner::buchberger(&ring, &by_kernel.generators).unwrap();
        let b = crate::groebner::buchberger(&ring, &by_elim).unwrap();
        assert_eq!(a.polys(), b.polys());
    }

    #[test]
    fn ev_matrix_is_linear_and_square_for_quintic() {
        let e = models::elliptic_normal_curve(5).unwrap();
        let f = PrimeField::default();
        let module = SectionModule::sections(&e, f, Twist::Zero, 0, 2).unwrap();
        let ev = build_ev_matrix(&module, 2, 1).unwrap();
        assert_eq!(ev.shape(), (5, 5));
        assert!(ev.is_linear());
        assert!(ev.scalar_injective());
        // a 5 × 5 matrix of linear forms that never has full rank
        assert_eq!(ev.generic_rank(3, 5), 4);
    }
}
