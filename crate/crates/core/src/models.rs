//! Catalog of embedded varieties as explicit homogeneous ideals with
//! metadata, plus curve sections, invariants and the JSON model format.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::groebner::{buchberger, GroebnerBasis};
use crate::hilbert::HilbertPolynomial;
use crate::linalg::{Rref, SparseMatrix};
use crate::poly::{monomials_of_degree, Monomial, PolyRing, Polynomial};

pub type RatPoly = Polynomial<BigRational>;

/// Coefficient bound for seeded "general" choices.
pub const COEFF_BOUND: i64 = 50;
pub const DEFAULT_SEED: u64 = 1;
pub const MAX_RESEEDS: u32 = 8;
const AMBIENT_CAP: usize = 9;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coeff(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-COEFF_BOUND..=COEFF_BOUND)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub n: usize,
    pub d: u64,
    pub e: usize,
    pub g: i64,
    pub gonality: Option<u32>,
    pub linearly_normal: bool,
    pub t: usize,
}

/// Case labels of the classification of varieties with 2-regular
/// structure sheaf. Minimal-degree varieties have 1-regular structure sheaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "case-1")]
    CurveNonSpecial,
    #[serde(rename = "case-2")]
    Surface,
    #[serde(rename = "reg-1 family")]
    RegularityOne,
    #[serde(rename = "other")]
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    RationalNormalCurve { a: u32 },
    Scroll { a: Vec<u32> },
    VeroneseSurface,
    QuadricHypersurface { n: u32 },
    EllipticNormalCurve { d: u32, curve: WeierstrassCurve },
    HyperellipticCurve { d: u32, curve: WeierstrassCurve },
    CurveSection { source: String, hyperplanes: Vec<Vec<i64>> },
    Projection { functional: Vec<i64> },
}

/// A projective variety `X ⊂ P^r` given by a homogeneous ideal over Q.
#[derive(Clone, Debug)]
pub struct EmbeddedModel {
    name: String,
    construction: Construction,
    ambient: usize,
    generators: Vec<RatPoly>,
    metadata: Metadata,
    case: CaseTag,
    parent: Option<Box<EmbeddedModel>>,
    /// Basis of this model's `V` in the parent's coordinates, one row per
    /// coordinate of this model.
    parent_subspace: Vec<Vec<BigRational>>,
    seed: Option<u64>,
    gb: OnceLock<GroebnerBasis<Rationals>>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn identity_rows(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect()
}

impl EmbeddedModel {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        name: String,
        construction: Construction,
        ambient: usize,
        generators: Vec<RatPoly>,
        metadata: Metadata,
        case: CaseTag,
        parent: Option<Box<EmbeddedModel>>,
        parent_subspace: Option<Vec<Vec<BigRational>>>,
        seed: Option<u64>,
    ) -> Self {
        let ring = PolyRing::grevlex(Rationals, ambient + 1);
        let mut generators: Vec<RatPoly> = generators.iter().map(|g| ring.primitive(g)).collect();
        generators.sort_by(|a, b| {
            a.degree().cmp(&b.degree()).then_with(|| {
                ring.cmp(&b.leading_monomial().unwrap(), &a.leading_monomial().unwrap())
            })
        });
        EmbeddedModel {
            name,
            construction,
            ambient,
            generators,
            metadata,
            case,
            parent,
            parent_subspace: parent_subspace.unwrap_or_else(|| identity_rows(ambient + 1)),
            seed,
            gb: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn construction(&self) -> &Construction {
        &self.construction
    }
    /// `r` for `X ⊂ P^r`.
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn nvars(&self) -> usize {
        self.ambient + 1
    }
    pub fn generators(&self) -> &[RatPoly] {
        &self.generators
    }
    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }
    pub fn case(&self) -> CaseTag {
        self.case
    }
    pub fn parent(&self) -> Option<&EmbeddedModel> {
        self.parent.as_deref()
    }
    pub fn parent_subspace(&self) -> &[Vec<BigRational>] {
        &self.parent_subspace
    }
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
    pub fn is_linearly_normal(&self) -> bool {
        self.parent.is_none()
    }

    /// The linearly normal model at the top of the projection chain.
    pub fn root(&self) -> &EmbeddedModel {
        match &self.parent {
            Some(p) => p.root(),
            None => self,
        }
    }

    /// Chain from the root down to this model.
    pub fn lineage(&self) -> Vec<&EmbeddedModel> {
        let mut out = match &self.parent {
            Some(p) => p.lineage(),
            None => Vec::new(),
        };
        out.push(self);
        out
    }

    /// Seeds of every randomized step from the root down.
    pub fn seed_chain(&self) -> Vec<u64> {
        self.lineage().iter().filter_map(|m| m.seed).collect()
    }

    /// Basis of `V` as linear forms in the root's coordinates.
    pub fn subspace_in_root(&self) -> Vec<Vec<BigRational>> {
        match &self.parent {
            None => identity_rows(self.nvars()),
            Some(p) => {
                let up = p.subspace_in_root();
                self.parent_subspace
                    .iter()
                    .map(|row| {
                        let mut out = vec![BigRational::zero(); up[0].len()];
                        for (c, urow) in row.iter().zip(&up) {
                            if c.is_zero() {
                                continue;
                            }
                            for (o, u) in out.iter_mut().zip(urow) {
                                *o += c * u;
                            }
                        }
                        out
                    })
                    .collect()
            }
        }
    }

    pub fn ring<F: Field>(&self, field: F) -> PolyRing<F> {
        PolyRing::grevlex(field, self.nvars())
    }

    pub fn generators_over<F: Field>(&self, ring: &PolyRing<F>) -> Result<Vec<Polynomial<F::Elem>>> {
        self.generators.iter().map(|g| ring.from_rational_poly(g)).collect()
    }

    pub fn groebner_over<F: Field>(&self, field: F) -> Result<GroebnerBasis<F>> {
        let ring = self.ring(field);
        let gens = self.generators_over(&ring)?;
        buchberger(&ring, &gens)
    }

    /// Reduced Gröbner basis over Q, computed once.
    pub fn groebner(&self) -> &GroebnerBasis<Rationals> {
        self.gb.get_or_init(|| {
            self.groebner_over(Rationals)
                .expect("catalog generators are homogeneous")
        })
    }

    pub fn hilbert_function(&self, m: u32) -> u64 {
        self.groebner().hilbert_function(m)
    }

    pub fn hilbert_polynomial(&self) -> Result<HilbertPolynomial> {
        self.groebner().hilbert_polynomial()
    }

    /// The Weierstrass curve at the root, with the embedding degree.
    pub fn weierstrass(&self) -> Option<(&WeierstrassCurve, u32)> {
        match &self.root().construction {
            Construction::EllipticNormalCurve { d, curve }
            | Construction::HyperellipticCurve { d, curve } => Some((curve, *d)),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let m = &self.metadata;
        format!(
            "{} in P^{}: n={} d={} e={} g={} t={}",
            self.name, self.ambient, m.n, m.d, m.e, m.g, m.t
        )
    }
}

/// Drops generators that are linear combinations of earlier ones of the
/// same degree.
pub fn independent_forms(ring: &PolyRing<Rationals>, polys: &[RatPoly]) -> Vec<RatPoly> {
    let mut out = Vec::new();
    let mut by_degree: std::collections::BTreeMap<u32, Vec<&RatPoly>> = Default::default();
    for p in polys.iter().filter(|p| !p.is_zero()) {
        by_degree.entry(p.degree().unwrap()).or_default().push(p);
    }
    for (deg, ps) in by_degree {
        let monos = monomials_of_degree(ring.nvars(), deg);
        let index = |m: &Monomial| monos.iter().position(|x| x == m).expect("homogeneous");
        let mut rref = Rref::empty(Rationals, monos.len());
        for p in ps {
            let mut v: Vec<(usize, BigRational)> =
                p.terms().iter().map(|(m, c)| (index(m), c.clone())).collect();
            v.sort_by_key(|(i, _)| *i);
            if rref.insert(v) {
                out.push(ring.primitive(p));
            }
        }
    }
    out
}

fn minor(ring: &PolyRing<Rationals>, a: usize, b: usize, c: usize, d: usize) -> RatPoly {
    // x_a*x_d − x_b*x_c
    let ad = ring.mul(&ring.var(a), &ring.var(d));
    let bc = ring.mul(&ring.var(b), &ring.var(c));
    ring.sub(&ad, &bc)
}

/// 2×2 minors of a matrix whose entries are variable indices.
fn two_by_two_minors(ring: &PolyRing<Rationals>, top: &[usize], bottom: &[usize]) -> Vec<RatPoly> {
    let mut out = Vec::new();
    for i in 0..top.len() {
        for j in i + 1..top.len() {
            let m = minor(ring, top[i], top[j], bottom[i], bottom[j]);
            if !m.is_zero() {
                out.push(m);
            }
        }
    }
    independent_forms(ring, &out)
}

fn vanish_under(
    ring: &PolyRing<Rationals>,
    gens: &[RatPoly],
    target: &PolyRing<Rationals>,
    images: &[RatPoly],
) -> bool {
    gens.iter().all(|g| ring.substitute(g, target, images).is_zero())
}

fn finish(model: EmbeddedModel) -> Result<EmbeddedModel> {
    let inv = invariants(&model)?;
    if inv != model.metadata {
        return Err(Error::Integrity(format!(
            "{}: stored metadata {:?} but computed {:?}",
            model.name, model.metadata, inv
        )));
    }
    Ok(model)
}

pub fn rational_normal_curve(a: u32) -> Result<EmbeddedModel> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!("rational normal curve needs degree ≥ 2, got {a}")));
    }
    let a_us = a as usize;
    if a_us > AMBIENT_CAP {
        return Err(Error::InvalidParameter(format!("ambient P^{a} exceeds P^{AMBIENT_CAP}")));
    }
    let ring = PolyRing::grevlex(Rationals, a_us + 1);
    let top: Vec<usize> = (0..a_us).collect();
    let bottom: Vec<usize> = (1..=a_us).collect();
    let gens = two_by_two_minors(&ring, &top, &bottom);
    let params = PolyRing::grevlex(Rationals, 2);
    let images: Vec<RatPoly> = (0..=a)
        .map(|j| params.monomial(Monomial::from_exponents(&[a - j, j])))
        .collect();
    debug_assert!(vanish_under(&ring, &gens, &params, &images));
    if !vanish_under(&ring, &gens, &params, &images) {
        return Err(Error::Integrity("minors do not vanish on the parametrization".into()));
    }
    finish(EmbeddedModel::assemble(
        format!("rational_normal_curve({a})"),
        Construction::RationalNormalCurve { a },
        a_us,
        gens,
        Metadata {
            n: 1,
            d: a as u64,
            e: a_us - 1,
            g: 0,
            gonality: Some(1),
            linearly_normal: true,
            t: 0,
        },
        CaseTag::RegularityOne,
        None,
        None,
        None,
    ))
}

pub fn scroll(a: &[u32]) -> Result<EmbeddedModel> {
    if a.len() < 2 {
        return Err(Error::InvalidParameter("a scroll needs at least two blocks".into()));
    }
    if a.iter().any(|&x| x == 0) {
        return Err(Error::InvalidParameter(format!("scroll degrees must be ≥ 1, got {a:?}")));
    }
    let k = a.len();
    let sum: u32 = a.iter().sum();
    let r = sum as usize + k - 1;
    if r > AMBIENT_CAP {
        return Err(Error::InvalidParameter(format!("scroll ambient P^{r} exceeds P^{AMBIENT_CAP}")));
    }
    let ring = PolyRing::grevlex(Rationals, r + 1);
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    let mut offset = 0;
    for &ai in a {
        for j in 0..ai as usize {
            top.push(offset + j);
            bottom.push(offset + j + 1);
        }
        offset += ai as usize + 1;
    }
    let gens = two_by_two_minors(&ring, &top, &bottom);
    // parameters s, t, u_1..u_k
    let params = PolyRing::grevlex(Rationals, 2 + k);
    let mut images = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        for j in 0..=ai {
            let mut e = vec![0u32; 2 + k];
            e[0] = ai - j;
            e[1] = j;
            e[2 + i] = 1;
            images.push(params.monomial(Monomial::from_exponents(&e)));
        }
    }
    if !vanish_under(&ring, &gens, &params, &images) {
        return Err(Error::Integrity("minors do not vanish on the parametrization".into()));
    }
    let label = a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    finish(EmbeddedModel::assemble(
        format!("scroll({label})"),
        Construction::Scroll { a: a.to_vec() },
        r,
        gens,
        Metadata {
            n: k,
            d: sum as u64,
            e: sum as usize - 1,
            g: 0,
            gonality: Some(1),
            linearly_normal: true,
            t: 0,
        },
        CaseTag::RegularityOne,
        None,
        None,
        None,
    ))
}

pub fn veronese_surface() -> Result<EmbeddedModel> {
    let ring = PolyRing::grevlex(Rationals, 6);
    let m = [[0usize, 1, 2], [1, 3, 4], [2, 4, 5]];
    let mut all = Vec::new();
    for r1 in 0..3 {
        for r2 in r1 + 1..3 {
            for c1 in 0..3 {
                for c2 in c1 + 1..3 {
                    all.push(minor(&ring, m[r1][c1], m[r1][c2], m[r2][c1], m[r2][c2]));
                }
            }
        }
    }
    let gens = independent_forms(&ring, &all);
    let params = PolyRing::grevlex(Rationals, 3);
    let images: Vec<RatPoly> = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        .iter()
        .map(|e| params.monomial(Monomial::from_exponents(e)))
        .collect();
    if !vanish_under(&ring, &gens, &params, &images) {
        return Err(Error::Integrity("minors do not vanish on the parametrization".into()));
    }
    finish(EmbeddedModel::assemble(
        "veronese_surface".into(),
        Construction::VeroneseSurface,
        5,
        gens,
        Metadata {
            n: 2,
            d: 4,
            e: 3,
            g: 0,
            gonality: Some(1),
            linearly_normal: true,
            t: 0,
        },
        CaseTag::RegularityOne,
        None,
        None,
        None,
    ))
}

pub fn quadric_hypersurface(n: u32) -> Result<EmbeddedModel> {
    if !(1..=7).contains(&n) {
        return Err(Error::InvalidParameter(format!("quadric dimension must be in 1..=7, got {n}")));
    }
    let nv = n as usize + 2;
    let ring = PolyRing::grevlex(Rationals, nv);
    let q = (0..nv).fold(Polynomial::zero(), |acc, i| {
        ring.add(&acc, &ring.mul(&ring.var(i), &ring.var(i)))
    });
    finish(EmbeddedModel::assemble(
        format!("quadric_hypersurface({n})"),
        Construction::QuadricHypersurface { n },
        nv - 1,
        vec![q],
        Metadata {
            n: n as usize,
            d: 2,
            e: 1,
            g: 0,
            gonality: Some(1),
            linearly_normal: true,
            t: 0,
        },
        CaseTag::RegularityOne,
        None,
        None,
        None,
    ))
}

fn seeded_roots(count: usize, seed: u64) -> Vec<i64> {
    let mut rng = rng_for(seed);
    let mut roots: Vec<i64> = Vec::with_capacity(count);
    while roots.len() < count {
        let r = random_coeff(&mut rng);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    roots
}

/// Quadrics through the image of `C → P(L(d·P∞))`, by linear algebra on
/// `Sym² → L(2d·P∞)`.
fn weierstrass_quadrics(curve: &WeierstrassCurve, d: u32) -> Result<(usize, Vec<RatPoly>)> {
    let q = Rationals;
    let poles = curve.pole_orders(d as i64);
    let coords: Vec<_> = poles.iter().map(|&o| curve.basis_element(&q, o)).collect();
    let nv = coords.len();
    let ring = PolyRing::grevlex(Rationals, nv);
    let monos = monomials_of_degree(nv, 2);
    let target_dim = curve.dim_riemann_roch(2 * d as i64);
    let mut triplets = Vec::new();
    for (col, m) in monos.iter().enumerate() {
        let idx: Vec<usize> = (0..nv).flat_map(|i| std::iter::repeat(i).take(m.exp(i) as usize)).collect();
        let prod = curve.mul(&q, &coords[idx[0]], &coords[idx[1]]);
        let cs = curve
            .coordinates(&q, &prod, 2 * d as i64)
            .ok_or_else(|| Error::Integrity("product left L(2D)".into()))?;
        for (row, c) in cs {
            triplets.push((row, col, c));
        }
    }
    let mat = SparseMatrix::from_triplets(q, target_dim, monos.len(), triplets)?;
    let (_, kernel) = mat.rank_kernel();
    let gens: Vec<RatPoly> = kernel
        .iter()
        .map(|v| {
            ring.from_terms(
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (monos[i], c.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok((nv - 1, gens))
}

fn weierstrass_model(
    genus: u32,
    d: u32,
    seed: u64,
    name: String,
    wrap: impl Fn(u32, WeierstrassCurve) -> Construction,
) -> Result<EmbeddedModel> {
    let mut last_reason = String::new();
    for attempt in 0..MAX_RESEEDS {
        let s = seed.wrapping_add(attempt as u64);
        let curve = WeierstrassCurve::new(genus, seeded_roots(2 * genus as usize + 1, s))?;
        let (r, gens) = weierstrass_quadrics(&curve, d)?;
        let model = EmbeddedModel::assemble(
            name.clone(),
            wrap(d, curve),
            r,
            gens,
            Metadata {
                n: 1,
                d: d as u64,
                e: r - 1,
                g: genus as i64,
                gonality: Some(2),
                linearly_normal: true,
                t: 0,
            },
            CaseTag::CurveNonSpecial,
            None,
            None,
            Some(s),
        );
        match finish(model) {
            Ok(m) => return Ok(m),
            Err(e) => last_reason = e.to_string(),
        }
    }
    Err(Error::GuardFailed {
        attempts: MAX_RESEEDS,
        reason: last_reason,
    })
}

pub fn elliptic_normal_curve(d: u32) -> Result<EmbeddedModel> {
    elliptic_normal_curve_seeded(d, DEFAULT_SEED)
}

/// Embedding of `y² = (x−a)(x−b)(x−c)` by `|d·O|`, roots chosen from the
/// seed.
pub fn elliptic_normal_curve_seeded(d: u32, seed: u64) -> Result<EmbeddedModel> {
    if !(4..=7).contains(&d) {
        return Err(Error::InvalidParameter(format!("elliptic degree must be in 4..=7, got {d}")));
    }
    weierstrass_model(1, d, seed, format!("elliptic_normal_curve({d})"), |d, curve| {
        Construction::EllipticNormalCurve { d, curve }
    })
}

pub fn hyperelliptic_curve(g: u32, d: u32) -> Result<EmbeddedModel> {
    hyperelliptic_curve_seeded(g, d, DEFAULT_SEED)
}

/// Genus-2 curve `y² = f(x)`, `deg f = 5`, embedded by `|d·P∞|`.
pub fn hyperelliptic_curve_seeded(g: u32, d: u32, seed: u64) -> Result<EmbeddedModel> {
    if g != 2 {
        return Err(Error::InvalidParameter(format!("only genus 2 is supported, got {g}")));
    }
    if !(2 * g + 3..=8).contains(&d) {
        return Err(Error::InvalidParameter(format!("degree must be in 7..=8, got {d}")));
    }
    weierstrass_model(g, d, seed, format!("hyperelliptic_curve({g},{d})"), |d, curve| {
        Construction::HyperellipticCurve { d, curve }
    })
}

/// Cuts a model of dimension `n ≥ 2` with `n − 1` seeded random hyperplanes.
pub fn curve_section(model: &EmbeddedModel, seed: u64) -> Result<EmbeddedModel> {
    let n = model.metadata.n;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("{} is already a curve", model.name)));
    }
    let target = curve_hilbert_polynomial(&model.hilbert_polynomial()?, n);
    let mut last_reason = String::new();
    for attempt in 0..MAX_RESEEDS {
        let s = seed.wrapping_add(attempt as u64);
        let (hyperplanes, gens, nv) = hyperplane_cut(model, n - 1, s);
        let ring = PolyRing::grevlex(Rationals, nv);
        let gens = independent_forms(&ring, &gens);
        let candidate = EmbeddedModel::assemble(
            format!("curve_section({})", model.name),
            Construction::CurveSection {
                source: model.name.clone(),
                hyperplanes,
            },
            nv - 1,
            gens,
            Metadata {
                n: 1,
                d: model.metadata.d,
                e: model.metadata.e,
                g: model.metadata.g,
                gonality: model.metadata.gonality,
                linearly_normal: true,
                t: 0,
            },
            model.case,
            None,
            None,
            Some(s),
        );
        match candidate.hilbert_polynomial() {
            Ok(hp) if hp == target => return Ok(candidate),
            Ok(hp) => last_reason = format!("section has Hilbert polynomial {hp}, expected {target}"),
            Err(e) => last_reason = e.to_string(),
        }
    }
    Err(Error::GuardFailed {
        attempts: MAX_RESEEDS,
        reason: last_reason,
    })
}

/// Hilbert polynomial of a general codimension-`(n−1)` linear section:
/// the `(n−1)`-fold backward difference.
fn curve_hilbert_polynomial(hp: &HilbertPolynomial, n: usize) -> HilbertPolynomial {
    let mut coeffs = hp.coeffs().to_vec();
    for _ in 0..n - 1 {
        // P(m) − P(m−1)
        let shifted = shift_back(&coeffs);
        coeffs = coeffs.iter().zip(&shifted).map(|(a, b)| a - b).collect();
    }
    HilbertPolynomial::from_coeffs(coeffs)
}

fn shift_back(coeffs: &[BigRational]) -> Vec<BigRational> {
    // coefficients of P(m − 1)
    let mut out = vec![BigRational::zero(); coeffs.len()];
    for (k, c) in coeffs.iter().enumerate() {
        // (m − 1)^k = Σ C(k, i) m^i (−1)^{k−i}
        let mut binom = BigInt::one();
        for i in (0..=k).rev() {
            let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
            out[i] += c * BigRational::from_integer(&binom * sign);
            if i > 0 {
                binom = binom * BigInt::from(i) / BigInt::from(k - i + 1);
            }
        }
    }
    out
}

/// Substitutes `count` random hyperplanes, each solved for its last
/// variable. Returns the hyperplane coefficients, the new generators and
/// the new variable count.
fn hyperplane_cut(model: &EmbeddedModel, count: usize, seed: u64) -> (Vec<Vec<i64>>, Vec<RatPoly>, usize) {
    let mut rng = rng_for(seed);
    let mut gens = model.generators.clone();
    let mut nv = model.nvars();
    let mut hyperplanes = Vec::new();
    for _ in 0..count {
        let mut h: Vec<i64> = (0..nv).map(|_| random_coeff(&mut rng)).collect();
        while h[nv - 1] == 0 {
            h[nv - 1] = random_coeff(&mut rng);
        }
        let src = PolyRing::grevlex(Rationals, nv);
        let dst = PolyRing::grevlex(Rationals, nv - 1);
        let last = rat(h[nv - 1]);
        let mut images: Vec<RatPoly> = (0..nv - 1).map(|i| dst.var(i)).collect();
        let solved = dst.linear_form(
            &h[..nv - 1]
                .iter()
                .map(|c| -rat(*c) / &last)
                .collect::<Vec<_>>(),
        );
        images.push(solved);
        gens = gens.iter().map(|g| src.substitute(g, &dst, &images)).collect();
        hyperplanes.push(h);
        nv -= 1;
    }
    (hyperplanes, gens, nv)
}

/// Recomputes `(n, d, e, g)` from Hilbert polynomials and checks them
/// against the stored record.
pub fn invariants(model: &EmbeddedModel) -> Result<Metadata> {
    let hp = model.hilbert_polynomial()?;
    let n = hp
        .dimension()
        .ok_or_else(|| Error::Integrity(format!("{} is empty", model.name)))?;
    let d = hp.degree();
    let g = if n == 1 {
        hp.genus()
    } else {
        let seed = model.seed.unwrap_or(DEFAULT_SEED);
        let section = curve_section(model, seed)?;
        section.hilbert_polynomial()?.genus()
    };
    if model.hilbert_function(1) != model.nvars() as u64 {
        return Err(Error::Integrity(format!("{} is degenerate", model.name)));
    }
    Ok(Metadata {
        n,
        d,
        e: model.ambient - n,
        g,
        gonality: model.metadata.gonality,
        linearly_normal: model.metadata.linearly_normal,
        t: model.metadata.t,
    })
}

/// A named catalog constructor with its expected invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub constructor: &'static str,
    pub params: Vec<u32>,
    /// `(n, d, e, g)`
    pub expected: (usize, u64, usize, i64),
    pub case: CaseTag,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<EmbeddedModel> {
        let m = build_by_name(self.constructor, &self.params, DEFAULT_SEED)?;
        let md = m.metadata();
        if (md.n, md.d, md.e, md.g) != self.expected || m.case() != self.case {
            return Err(Error::Integrity(format!(
                "{} built with {:?}, expected {:?}",
                m.name(),
                (md.n, md.d, md.e, md.g),
                self.expected
            )));
        }
        Ok(m)
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let one = CaseTag::RegularityOne;
    for a in 2..=5u32 {
        out.push(CatalogEntry {
            constructor: "rational-normal-curve",
            params: vec![a],
            expected: (1, a as u64, a as usize - 1, 0),
            case: one,
        });
    }
    for a in [vec![1, 1], vec![1, 2], vec![2, 2]] {
        let d: u32 = a.iter().sum();
        out.push(CatalogEntry {
            constructor: "scroll",
            expected: (a.len(), d as u64, d as usize - 1, 0),
            params: a,
            case: one,
        });
    }
    out.push(CatalogEntry {
        constructor: "veronese-surface",
        params: vec![],
        expected: (2, 4, 3, 0),
        case: one,
    });
    for n in 1..=3u32 {
        out.push(CatalogEntry {
            constructor: "quadric-hypersurface",
            params: vec![n],
            expected: (n as usize, 2, 1, 0),
            case: one,
        });
    }
    for d in 4..=7u32 {
        out.push(CatalogEntry {
            constructor: "elliptic-normal-curve",
            params: vec![d],
            expected: (1, d as u64, d as usize - 2, 1),
            case: CaseTag::CurveNonSpecial,
        });
    }
    for d in 7..=8u32 {
        out.push(CatalogEntry {
            constructor: "hyperelliptic-curve",
            params: vec![2, d],
            expected: (1, d as u64, d as usize - 3, 2),
            case: CaseTag::CurveNonSpecial,
        });
    }
    out
}

/// Builds a catalog model from its kebab-case constructor name.
pub fn build_by_name(name: &str, params: &[u32], seed: u64) -> Result<EmbeddedModel> {
    let need = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{name} takes {k} parameter(s), got {}", params.len())))
        }
    };
    match name.replace('_', "-").as_str() {
        "rational-normal-curve" => {
            need(1)?;
            rational_normal_curve(params[0])
        }
        "scroll" => scroll(params),
        "veronese-surface" => {
            need(0)?;
            veronese_surface()
        }
        "quadric-hypersurface" => {
            need(1)?;
            quadric_hypersurface(params[0])
        }
        "elliptic-normal-curve" => {
            need(1)?;
            elliptic_normal_curve_seeded(params[0], seed)
        }
        "hyperelliptic-curve" => {
            need(2)?;
            hyperelliptic_curve_seeded(params[0], params[1], seed)
        }
        other => Err(Error::InvalidParameter(format!("unknown constructor `{other}`"))),
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    name: String,
    ambient: usize,
    variables: Vec<String>,
    generators: Vec<String>,
    metadata: Metadata,
    case: CaseTag,
    construction: Construction,
    seed: Option<u64>,
    seed_chain: Vec<u64>,
    parent_subspace: Option<Vec<Vec<String>>>,
    parent: Option<Box<ModelFile>>,
}

impl ModelFile {
    fn from_model(m: &EmbeddedModel) -> Self {
        let ring = m.ring(Rationals);
        ModelFile {
            name: m.name.clone(),
            ambient: m.ambient,
            variables: (0..m.nvars()).map(|i| format!("x{i}")).collect(),
            generators: m.generators.iter().map(|g| ring.format(g)).collect(),
            metadata: m.metadata.clone(),
            case: m.case,
            construction: m.construction.clone(),
            seed: m.seed,
            seed_chain: m.seed_chain(),
            parent_subspace: m.parent.as_ref().map(|_| {
                m.parent_subspace
                    .iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect())
                    .collect()
            }),
            parent: m.parent.as_ref().map(|p| Box::new(ModelFile::from_model(p))),
        }
    }

    fn into_model(self) -> Result<EmbeddedModel> {
        let nv = self.ambient + 1;
        if self.variables.len() != nv {
            return Err(Error::Parse(format!(
                "{} variables for P^{}",
                self.variables.len(),
                self.ambient
            )));
        }
        let ring = PolyRing::grevlex(Rationals, nv);
        let gens = self
            .generators
            .iter()
            .map(|g| ring.parse(g))
            .collect::<Result<Vec<_>>>()?;
        let parent = match self.parent {
            Some(p) => Some(Box::new(p.into_model()?)),
            None => None,
        };
        let subspace = match &self.parent_subspace {
            None => None,
            Some(rows) => {
                let width = parent.as_ref().map(|p| p.nvars()).unwrap_or(nv);
                let parsed = rows
                    .iter()
                    .map(|row| {
                        if row.len() != width {
                            return Err(Error::Parse("subspace row width".into()));
                        }
                        row.iter()
                            .map(|c| c.parse::<BigRational>().map_err(|e| Error::Parse(e.to_string())))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if parsed.len() != nv {
                    return Err(Error::Parse("subspace row count".into()));
                }
                Some(parsed)
            }
        };
        if parent.is_some() != subspace.is_some() {
            return Err(Error::Parse("parent and parent_subspace must appear together".into()));
        }
        Ok(EmbeddedModel::assemble(
            self.name,
            self.construction,
            self.ambient,
            gens,
            self.metadata,
            self.case,
            parent,
            subspace,
            self.seed,
        ))
    }
}

impl EmbeddedModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelFile::from_model(self))?)
    }

    pub fn from_json(text: &str) -> Result<EmbeddedModel> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_and_twisted_cubic() {
        let c = rational_normal_curve(2).unwrap();
        assert_eq!(c.generators().len(), 1);
        let t = rational_normal_curve(3).unwrap();
        assert_eq!(t.generators().len(), 3);
        assert!(rational_normal_curve(1).is_err());
    }

    #[test]
    fn scroll_parameters() {
        assert_eq!(scroll(&[1, 1]).unwrap().generators().len(), 1);
        let s = scroll(&[1, 2]).unwrap();
        assert_eq!(s.generators().len(), 3);
        assert_eq!(s.ambient(), 4);
        assert!(scroll(&[0, 1]).is_err());
        assert!(scroll(&[3]).is_err());
        assert!(scroll(&[4, 5]).is_err());
    }

    #[test]
    fn elliptic_quartic_is_two_quadrics() {
        let e = elliptic_normal_curve(4).unwrap();
        assert_eq!(e.generators().len(), 2);
        assert_eq!(e.hilbert_polynomial().unwrap().to_string(), "4m");
    }

    #[test]
    fn shift_back_matches_difference() {
        // P(m) = (m² + 3m + 2)/2; P(m) − P(m−1) = m + 1
        let hp = HilbertPolynomial::from_coeffs(vec![rat(1), BigRational::new(3.into(), 2.into()), BigRational::new(1.into(), 2.into())]);
        let c = curve_hilbert_polynomial(&hp, 2);
        assert_eq!(c.to_string(), "m + 1");
    }

    #[test]
    fn json_round_trip() {
        let m = elliptic_normal_curve(5).unwrap();
        let a = m.to_json().unwrap();
        let back = EmbeddedModel::from_json(&a).unwrap();
        assert_eq!(back.to_json().unwrap(), a);
    }
}
