//! Section modules `⊕_m H⁰(X, B + mH)` with multiplication by the
//! elements of `V`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{buchberger, GroebnerBasis};
use crate::linalg::SparseMatrix;
use crate::models::EmbeddedModel;
use crate::poly::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Twist {
    Zero,
    Canonical,
}

impl std::fmt::Display for Twist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Twist::Zero => write!(f, "O"),
            Twist::Canonical => write!(f, "K"),
        }
    }
}

/// Which module a table was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleKind {
    /// `S/I` with `V` all ambient linear forms.
    CoordinateRing,
    /// `R(X, B, H)` of the linearly normal root with the model's `V`.
    Sections,
}

#[derive(Clone, Debug)]
pub struct SectionModule<F: Field> {
    field: F,
    kind: ModuleKind,
    twist: Twist,
    low: i32,
    high: i32,
    dims: Vec<usize>,
    /// Multiplication by root coordinate `i` from piece `m` to `m + 1`,
    /// indexed `[m − low][i]`.
    root_mult: Vec<Vec<SparseMatrix<F>>>,
    /// `V` basis in root coordinates.
    v_basis: Vec<Vec<F::Elem>>,
    /// Multiplication by `V` basis element `j`, indexed `[m − low][j]`.
    v_mult: Vec<Vec<SparseMatrix<F>>>,
}

trait Backend<F: Field> {
    fn dim(&self, m: i32) -> usize;
    fn nroot(&self) -> usize;
    fn mult(&self, i: usize, m: i32) -> Result<SparseMatrix<F>>;
}

struct Quotient<F: Field> {
    gb: GroebnerBasis<F>,
    bases: HashMap<i32, Vec<Monomial>>,
    index: HashMap<i32, HashMap<Monomial, usize>>,
}

impl<F: Field> Quotient<F> {
    fn new(gb: GroebnerBasis<F>, low: i32, high: i32) -> Self {
        let mut bases = HashMap::new();
        let mut index = HashMap::new();
        for m in low..=high {
            let b = if m < 0 {
                Vec::new()
            } else {
                gb.standard_monomials(m as u32)
            };
            index.insert(m, b.iter().enumerate().map(|(i, x)| (*x, i)).collect());
            bases.insert(m, b);
        }
        Quotient { gb, bases, index }
    }
}

impl<F: Field> Backend<F> for Quotient<F> {
    fn dim(&self, m: i32) -> usize {
        self.bases[&m].len()
    }
    fn nroot(&self) -> usize {
        self.gb.ring().nvars()
    }
    fn mult(&self, i: usize, m: i32) -> Result<SparseMatrix<F>> {
        let ring = self.gb.ring();
        let src = &self.bases[&m];
        let dst = &self.index[&(m + 1)];
        let xi = Monomial::var(i);
        let mut triplets = Vec::new();
        for (col, s) in src.iter().enumerate() {
            let prod = ring.monomial(xi.mul(s));
            let nf = self.gb.normal_form(&prod);
            for (mono, c) in nf.terms() {
                let row = *dst
                    .get(mono)
                    .ok_or_else(|| Error::Integrity("normal form left the standard basis".into()))?;
                triplets.push((row, col, c.clone()));
            }
        }
        SparseMatrix::from_triplets(ring.field().clone(), dst.len(), src.len(), triplets)
    }
}

struct FunctionField<F: Field> {
    field: F,
    curve: WeierstrassCurve,
    degree: i64,
    offset: i64,
}

impl<F: Field> FunctionField<F> {
    fn level(&self, m: i32) -> i64 {
        self.offset + m as i64 * self.degree
    }
}

impl<F: Field> Backend<F> for FunctionField<F> {
    fn dim(&self, m: i32) -> usize {
        self.curve.dim_riemann_roch(self.level(m))
    }
    fn nroot(&self) -> usize {
        self.curve.dim_riemann_roch(self.degree)
    }
    fn mult(&self, i: usize, m: i32) -> Result<SparseMatrix<F>> {
        let f = &self.field;
        let coord_pole = self.curve.pole_orders(self.degree)[i];
        let coord = self.curve.basis_element(f, coord_pole);
        let src = self.curve.pole_orders(self.level(m));
        let dst_level = self.level(m + 1);
        let mut triplets = Vec::new();
        for (col, &pole) in src.iter().enumerate() {
            let prod = self.curve.mul(f, &coord, &self.curve.basis_element(f, pole));
            let cs = self
                .curve
                .coordinates(f, &prod, dst_level)
                .ok_or_else(|| Error::Integrity("product left the Riemann–Roch space".into()))?;
            for (row, c) in cs {
                triplets.push((row, col, c));
            }
        }
        SparseMatrix::from_triplets(f.clone(), self.curve.dim_riemann_roch(dst_level), src.len(), triplets)
    }
}

impl<F: Field> SectionModule<F> {
    /// `S/I` of the model itself, with `V` the ambient linear forms. Pieces
    /// `low..=high` are built.
    pub fn coordinate_ring(model: &EmbeddedModel, field: F, low: i32, high: i32) -> Result<Self> {
        let gb = model.groebner_over(field.clone())?;
        let backend = Quotient::new(gb, low, high);
        let n = model.nvars();
        let v_basis = identity(&field, n);
        Self::assemble(field, ModuleKind::CoordinateRing, Twist::Zero, low, high, &backend, v_basis)
    }

    /// `R(X, B, H)` of the linearly normal root, acted on by the model's
    /// `V` (all of `H⁰(O_X(1))` when the model is linearly normal).
    pub fn sections(model: &EmbeddedModel, field: F, twist: Twist, low: i32, high: i32) -> Result<Self> {
        let v_basis = model
            .subspace_in_root()
            .iter()
            .map(|row| row.iter().map(|c| field.from_rational(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::sections_for(model.root(), field, twist, low, high, v_basis)
    }

    /// Like [`SectionModule::sections`] with an explicit `V` basis given in
    /// the root's coordinates.
    pub fn sections_for(
        root: &EmbeddedModel,
        field: F,
        twist: Twist,
        low: i32,
        high: i32,
        v_basis: Vec<Vec<F::Elem>>,
    ) -> Result<Self> {
        match root.weierstrass() {
            Some((curve, d)) => {
                if !curve.is_smooth_over(&field) {
                    return Err(Error::BadReduction(format!(
                        "roots {:?} collide over {}",
                        curve.roots,
                        field.descriptor()
                    )));
                }
                let offset = match twist {
                    Twist::Zero => 0,
                    Twist::Canonical => 2 * curve.genus as i64 - 2,
                };
                let backend = FunctionField {
                    field: field.clone(),
                    curve: curve.clone(),
                    degree: d as i64,
                    offset,
                };
                let module = Self::assemble(field, ModuleKind::Sections, twist, low, high, &backend, v_basis)?;
                if twist == Twist::Zero {
                    debug_assert!((low.max(0)..=high).all(|m| {
                        module.dims[(m - low) as usize] as u64 == root.hilbert_function(m as u32)
                    }));
                }
                Ok(module)
            }
            None => {
                if twist == Twist::Canonical {
                    return Err(Error::Unsupported(format!(
                        "no canonical basis in the catalog for {}",
                        root.name()
                    )));
                }
                let gb = buchberger(&root.ring(field.clone()), &root.generators_over(&root.ring(field.clone()))?)?;
                let backend = Quotient::new(gb, low, high);
                Self::assemble(field, ModuleKind::Sections, twist, low, high, &backend, v_basis)
            }
        }
    }

    fn assemble(
        field: F,
        kind: ModuleKind,
        twist: Twist,
        low: i32,
        high: i32,
        backend: &dyn Backend<F>,
        v_basis: Vec<Vec<F::Elem>>,
    ) -> Result<Self> {
        if high < low {
            return Err(Error::InvalidParameter(format!("empty window {low}..={high}")));
        }
        let nroot = backend.nroot();
        if v_basis.iter().any(|row| row.len() != nroot) {
            return Err(Error::Shape("V basis width differs from the root coordinates".into()));
        }
        let dims: Vec<usize> = (low..=high).map(|m| backend.dim(m)).collect();
        let mut root_mult = Vec::new();
        let mut v_mult = Vec::new();
        for m in low..high {
            let mats = (0..nroot).map(|i| backend.mult(i, m)).collect::<Result<Vec<_>>>()?;
            let vm = v_basis
                .iter()
                .map(|row| combine(&field, row, &mats, dims[(m + 1 - low) as usize], dims[(m - low) as usize]))
                .collect::<Result<Vec<_>>>()?;
            root_mult.push(mats);
            v_mult.push(vm);
        }
        Ok(SectionModule {
            field,
            kind,
            twist,
            low,
            high,
            dims,
            root_mult,
            v_basis,
            v_mult,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn kind(&self) -> ModuleKind {
        self.kind
    }
    pub fn twist(&self) -> Twist {
        self.twist
    }
    pub fn window(&self) -> (i32, i32) {
        (self.low, self.high)
    }
    pub fn v_dim(&self) -> usize {
        self.v_basis.len()
    }
    pub fn v_basis(&self) -> &[Vec<F::Elem>] {
        &self.v_basis
    }
    pub fn root_dim(&self) -> usize {
        self.v_basis.first().map(|r| r.len()).unwrap_or(0)
    }

    /// Fails with a window error unless pieces `low..=high` are present.
    pub fn require(&self, low: i32, high: i32) -> Result<()> {
        if low < self.low || high > self.high {
            return Err(Error::Window {
                needed_low: low,
                needed_high: high,
                have_low: self.low,
                have_high: self.high,
            });
        }
        Ok(())
    }

    pub fn dim(&self, m: i32) -> Result<usize> {
        self.require(m, m)?;
        Ok(self.dims[(m - self.low) as usize])
    }

    /// Multiplication by the `j`-th basis element of `V`, piece `m → m+1`.
    pub fn v_mult(&self, j: usize, m: i32) -> Result<&SparseMatrix<F>> {
        self.require(m, m + 1)?;
        Ok(&self.v_mult[(m - self.low) as usize][j])
    }

    /// Multiplication by root coordinate `i`, piece `m → m+1`.
    pub fn root_mult(&self, i: usize, m: i32) -> Result<&SparseMatrix<F>> {
        self.require(m, m + 1)?;
        Ok(&self.root_mult[(m - self.low) as usize][i])
    }

    /// Multiplication by an arbitrary linear form in root coordinates.
    pub fn linear_mult(&self, form: &[F::Elem], m: i32) -> Result<SparseMatrix<F>> {
        self.require(m, m + 1)?;
        let mats = &self.root_mult[(m - self.low) as usize];
        combine(&self.field, form, mats, self.dims[(m + 1 - self.low) as usize], self.dims[(m - self.low) as usize])
    }

    /// Checks `(ℓ1·)∘(ℓ2·) = (ℓ2·)∘(ℓ1·)` for all pairs of `V` basis elements
    /// on every piece where both products are defined.
    pub fn check_commutation(&self) -> Result<bool> {
        for m in self.low..self.high - 1 {
            let here = &self.v_mult[(m - self.low) as usize];
            let next = &self.v_mult[(m + 1 - self.low) as usize];
            for a in 0..here.len() {
                for b in a + 1..here.len() {
                    let ab = next[a].compose(&here[b])?;
                    let ba = next[b].compose(&here[a])?;
                    if ab.triplets().collect::<Vec<_>>() != ba.triplets().collect::<Vec<_>>() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn identity<F: Field>(f: &F, n: usize) -> Vec<Vec<F::Elem>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

fn combine<F: Field>(
    f: &F,
    coeffs: &[F::Elem],
    mats: &[SparseMatrix<F>],
    nrows: usize,
    ncols: usize,
) -> Result<SparseMatrix<F>> {
    let mut triplets = Vec::new();
    for (c, m) in coeffs.iter().zip(mats) {
        if f.is_zero(c) {
            continue;
        }
        for (r, col, v) in m.triplets() {
            triplets.push((r, col, f.mul(c, v)));
        }
    }
    SparseMatrix::from_triplets(f.clone(), nrows, ncols, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::models;

    #[test]
    fn coordinate_ring_dims_follow_hilbert_function() {
        let t = models::rational_normal_curve(3).unwrap();
        let m = SectionModule::coordinate_ring(&t, Rationals, -1, 4).unwrap();
        assert_eq!(m.dim(-1).unwrap(), 0);
        for d in 0..=4 {
            assert_eq!(m.dim(d).unwrap(), 3 * d as usize + 1);
        }
        assert!(m.check_commutation().unwrap());
        assert!(matches!(m.dim(5), Err(Error::Window { .. })));
    }

    #[test]
    fn elliptic_twists_agree() {
        let e = models::elliptic_normal_curve(5).unwrap();
        let f = PrimeField::default();
        let z = SectionModule::sections(&e, f, Twist::Zero, -1, 3).unwrap();
        let k = SectionModule::sections(&e, f, Twist::Canonical, -1, 3).unwrap();
        for m in -1..=3 {
            assert_eq!(z.dim(m).unwrap(), k.dim(m).unwrap());
        }
        assert_eq!(z.dim(2).unwrap(), 10);
        assert!(z.check_commutation().unwrap());
    }

    #[test]
    fn hyperelliptic_canonical_piece_sizes() {
        let c = models::hyperelliptic_curve(2, 7).unwrap();
        let k = SectionModule::sections(&c, PrimeField::default(), Twist::Canonical, -1, 2).unwrap();
        // h0(K) = g, h0(K + H) = 2g − 2 + d − g + 1
        assert_eq!(k.dim(0).unwrap(), 2);
        assert_eq!(k.dim(1).unwrap(), 8);
        assert_eq!(k.dim(-1).unwrap(), 0);
    }

    #[test]
    fn canonical_twist_needs_catalog_basis() {
        let t = models::rational_normal_curve(3).unwrap();
        assert!(matches!(
            SectionModule::sections(&t, Rationals, Twist::Canonical, 0, 2),
            Err(Error::Unsupported(_))
        ));
    }
}
