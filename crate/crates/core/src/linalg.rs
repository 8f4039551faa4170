//! Sparse exact linear algebra: rank, kernels, reduced echelon forms and
//! products of [`SparseMatrix`] values over any [`Field`].
//!
//! Rank over a prime field uses a dense-accumulator row reduction. Rank over
//! the rationals goes through a fraction-free integer elimination that keeps
//! every stored row primitive, which controls coefficient growth on the
//! Koszul matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{gcd_slice, Field, Rationals};

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    /// Row-major; each row sorted by column.
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(field: F, nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            field,
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let rows = (0..n).map(|i| vec![(i, one.clone())]).collect();
        SparseMatrix {
            field,
            nrows: n,
            ncols: n,
            rows,
        }
    }

    /// Builds a matrix from triplets. Duplicate keys are summed and zero
    /// results dropped.
    pub fn from_triplets(
        field: F,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Result<Self> {
        let mut buckets: Vec<HashMap<usize, F::Elem>> = vec![HashMap::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::Shape(format!(
                    "entry ({r},{c}) outside {nrows}x{ncols}"
                )));
            }
            let slot = buckets[r].entry(c).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        let rows = buckets
            .into_iter()
            .map(|b| {
                let mut row: SparseVec<F::Elem> =
                    b.into_iter().filter(|(_, v)| !field.is_zero(v)).collect();
                row.sort_unstable_by_key(|(c, _)| *c);
                row
            })
            .collect();
        Ok(SparseMatrix {
            field,
            nrows,
            ncols,
            rows,
        })
    }

    pub fn from_dense(field: F, dense: &[Vec<F::Elem>], ncols: usize) -> Result<Self> {
        let mut trip = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Shape(format!("row {r} has length {}", row.len())));
            }
            for (c, v) in row.iter().enumerate() {
                if !field.is_zero(v) {
                    trip.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(field, dense.len(), ncols, trip)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
    pub fn is_zero_matrix(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&c, |(cc, _)| *cc) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            field: self.field.clone(),
            nrows: self.ncols,
            ncols: self.nrows,
            rows: cols,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    /// `self * v` for a dense column vector.
    pub fn mul_dense(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.ncols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.ncols
            )));
        }
        let f = &self.field;
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter().fold(f.zero(), |acc, (c, a)| {
                    if f.is_zero(&v[*c]) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, &v[*c]))
                    }
                })
            })
            .collect())
    }

    /// Exact product `self * rhs`.
    pub fn compose(&self, rhs: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
        compose(self, rhs)
    }

    pub fn rank(&self) -> usize {
        let r = if self.ncols < self.nrows {
            self.field.rank_rows(self.transpose().rows, self.nrows)
        } else {
            self.field.rank_rows(self.rows.clone(), self.ncols)
        };
        debug_assert!(r <= self.nrows.min(self.ncols));
        r
    }

    /// Rank together with a basis of the right kernel `{v : M v = 0}`.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<F::Elem>>) {
        let rref = Rref::from_rows(self.field.clone(), self.ncols, self.rows.iter().cloned());
        let kernel = rref.kernel_basis();
        let rank = rref.rank();
        debug_assert_eq!(rank + kernel.len(), self.ncols);
        #[cfg(debug_assertions)]
        for v in &kernel {
            let mv = self.mul_dense(v).expect("shape");
            debug_assert!(mv.iter().all(|x| self.field.is_zero(x)));
        }
        (rank, kernel)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f.clone(), self.nrows, self.ncols);
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, f.mul(c, v))).collect())
            .collect();
        SparseMatrix {
            field: f.clone(),
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(Error::Shape(format!(
                "{}x{} + {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(a, b)| axpy(f, a, &f.one(), b))
            .collect();
        Ok(SparseMatrix {
            field: f.clone(),
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        })
    }
}

pub fn compose<F: Field>(a: &SparseMatrix<F>, b: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
    if a.ncols != b.nrows {
        return Err(Error::Shape(format!(
            "cannot compose {}x{} with {}x{}",
            a.nrows, a.ncols, b.nrows, b.ncols
        )));
    }
    let f = &a.field;
    let mut rows = Vec::with_capacity(a.nrows);
    let mut acc: Vec<Option<F::Elem>> = vec![None; b.ncols];
    let mut touched: Vec<usize> = Vec::new();
    for arow in &a.rows {
        for (k, av) in arow {
            for (j, bv) in &b.rows[*k] {
                let prod = f.mul(av, bv);
                match &mut acc[*j] {
                    Some(x) => *x = f.add(x, &prod),
                    slot @ None => {
                        *slot = Some(prod);
                        touched.push(*j);
                    }
                }
            }
        }
        touched.sort_unstable();
        let mut row = Vec::with_capacity(touched.len());
        for j in touched.drain(..) {
            let v = acc[j].take().expect("touched");
            if !f.is_zero(&v) {
                row.push((j, v));
            }
        }
        rows.push(row);
    }
    Ok(SparseMatrix {
        field: f.clone(),
        nrows: a.nrows,
        ncols: b.ncols,
        rows,
    })
}

/// `a + c * b` on sorted sparse vectors.
pub fn axpy<F: Field>(
    f: &F,
    a: &[(usize, F::Elem)],
    c: &F::Elem,
    b: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    if f.is_zero(c) {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Deterministic processing order: leading column, then row length, then
/// original index.
fn pivot_order<E>(rows: &[SparseVec<E>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    idx.sort_by_key(|&i| (rows[i][0].0, rows[i].len(), i));
    idx
}

/// Rank by row reduction with a dense accumulator. Works over any field;
/// used directly for prime fields.
pub fn field_rank<F: Field>(f: &F, rows: Vec<SparseVec<F::Elem>>, ncols: usize) -> usize {
    let order = pivot_order(&rows);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut pivots: Vec<SparseVec<F::Elem>> = Vec::new();
    let mut dense: Vec<F::Elem> = vec![f.zero(); ncols];
    for ri in order {
        let row = &rows[ri];
        let start = row[0].0;
        for (c, v) in row {
            dense[*c] = v.clone();
        }
        let mut new_pivot = None;
        for c in start..ncols {
            if f.is_zero(&dense[c]) {
                continue;
            }
            match pivot_of_col[c] {
                Some(pi) => {
                    let factor = dense[c].clone();
                    for (pc, pv) in &pivots[pi] {
                        dense[*pc] = f.sub_mul(&dense[*pc], &factor, pv);
                    }
                }
                None => {
                    new_pivot = Some(c);
                    break;
                }
            }
        }
        if let Some(c) = new_pivot {
            let inv = f.inv(&dense[c]).expect("nonzero");
            let mut prow = Vec::new();
            for (k, slot) in dense.iter_mut().enumerate().skip(c) {
                if !f.is_zero(slot) {
                    prow.push((k, f.mul(slot, &inv)));
                    *slot = f.zero();
                }
            }
            pivot_of_col[c] = Some(pivots.len());
            pivots.push(prow);
        } else {
            for slot in dense.iter_mut().skip(start) {
                *slot = f.zero();
            }
        }
    }
    pivots.len()
}

/// Fraction-free echelon form: primitive integer rows with distinct
/// leading columns, positive leading entries. Rows are scaled to primitive
/// integer vectors; reductions combine rows with cofactors of the gcd of
/// the two leading entries and then divide out the content again.
fn fraction_free_echelon(rows: Vec<SparseVec<BigRational>>, ncols: usize) -> Vec<SparseVec<BigInt>> {
    let int_rows: Vec<SparseVec<BigInt>> = rows.into_iter().map(primitive_integer_row).collect();
    let order = pivot_order(&int_rows);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut pivots: Vec<SparseVec<BigInt>> = Vec::new();
    for ri in order {
        let mut row = int_rows[ri].clone();
        loop {
            let Some((lead_col, lead_val)) = row.first().cloned() else {
                break;
            };
            let Some(pi) = pivot_of_col[lead_col] else {
                break;
            };
            let prow = &pivots[pi];
            let a = &prow[0].1;
            let g = a.gcd(&lead_val);
            let ma = a / &g;
            let mb = &lead_val / &g;
            row = int_combine(&row, &ma, prow, &mb);
            make_primitive(&mut row);
        }
        if let Some((c, _)) = row.first() {
            let c = *c;
            if row[0].1.is_negative() {
                for (_, v) in row.iter_mut() {
                    *v = -&*v;
                }
            }
            pivot_of_col[c] = Some(pivots.len());
            pivots.push(row);
        }
    }
    pivots
}

pub fn fraction_free_rank(rows: Vec<SparseVec<BigRational>>, ncols: usize) -> usize {
    fraction_free_echelon(rows, ncols).len()
}

/// Kernel of the row space over the rationals without rational
/// arithmetic: one primitive integer vector per free column, in increasing
/// order of the free column.
pub fn fraction_free_kernel(rows: Vec<SparseVec<BigRational>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut pivots = fraction_free_echelon(rows, ncols);
    pivots.sort_by_key(|r| r[0].0);
    // clear every pivot column above its pivot, last pivot first
    for i in (0..pivots.len()).rev() {
        let (col, a) = pivots[i][0].clone();
        for j in 0..i {
            let Ok(pos) = pivots[j].binary_search_by_key(&col, |(c, _)| *c) else {
                continue;
            };
            let b = pivots[j][pos].1.clone();
            let g = a.gcd(&b);
            let combined = int_combine(&pivots[j], &(&a / &g), &pivots[i], &(&b / &g));
            let mut combined = combined;
            make_primitive(&mut combined);
            if combined[0].1.is_negative() {
                for (_, v) in combined.iter_mut() {
                    *v = -&*v;
                }
            }
            pivots[j] = combined;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|r| r[0].0).collect();
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_cols.binary_search(&free).is_ok() {
            continue;
        }
        let mut lcm = BigInt::one();
        let mut hits = Vec::new();
        for row in &pivots {
            if let Ok(pos) = row.binary_search_by_key(&free, |(c, _)| *c) {
                lcm = lcm.lcm(&row[0].1);
                hits.push((row[0].0, row[0].1.clone(), row[pos].1.clone()));
            }
        }
        let mut v = vec![BigInt::zero(); ncols];
        v[free] = lcm.clone();
        for (col, lead, entry) in hits {
            v[col] = -(entry * (&lcm / lead));
        }
        let g = gcd_slice(&v);
        if !g.is_one() && !g.is_zero() {
            for x in v.iter_mut() {
                *x = &*x / &g;
            }
        }
        out.push(v);
    }
    out
}

/// `ma * a - mb * b` on sorted integer rows.
fn int_combine(a: &[(usize, BigInt)], ma: &BigInt, b: &[(usize, BigInt)], mb: &BigInt) -> SparseVec<BigInt> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, &a[i].1 * ma));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(&b[j].1 * mb)));
            j += 1;
        } else {
            let v = &a[i].1 * ma - &b[j].1 * mb;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(row: &mut SparseVec<BigInt>) {
    if row.is_empty() {
        return;
    }
    let vals: Vec<BigInt> = row.iter().map(|(_, v)| v.clone()).collect();
    let g = gcd_slice(&vals);
    if !g.is_one() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Clears denominators and divides by the content.
pub fn primitive_integer_row(row: SparseVec<BigRational>) -> SparseVec<BigInt> {
    let mut lcm = BigInt::one();
    for (_, v) in &row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: SparseVec<BigInt> = row
        .into_iter()
        .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

/// Reduced row echelon form of a set of vectors. Supports reduction of new
/// vectors against the span and kernel extraction.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    field: F,
    ncols: usize,
    /// `(pivot column, row)` sorted by pivot column; each row has a 1 in its
    /// pivot column and zeros in every other pivot column.
    rows: Vec<(usize, SparseVec<F::Elem>)>,
    pivot_index: HashMap<usize, usize>,
}

impl<F: Field> Rref<F> {
    pub fn empty(field: F, ncols: usize) -> Self {
        Rref {
            field,
            ncols,
            rows: Vec::new(),
            pivot_index: HashMap::new(),
        }
    }

    pub fn from_rows(
        field: F,
        ncols: usize,
        rows: impl IntoIterator<Item = SparseVec<F::Elem>>,
    ) -> Self {
        let mut rref = Self::empty(field, ncols);
        let rows: Vec<_> = rows.into_iter().collect();
        for i in pivot_order(&rows) {
            rref.insert(rows[i].clone());
        }
        rref
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F::Elem>> {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Clears every pivot column of `v`.
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut cur: SparseVec<F::Elem> = v.to_vec();
        // Pivot rows are mutually reduced, so one pass in column order is
        // enough: clearing column c never reintroduces an earlier pivot.
        let mut k = 0;
        while k < cur.len() {
            let (c, val) = cur[k].clone();
            if let Some(&pi) = self.pivot_index.get(&c) {
                let neg = f.neg(&val);
                cur = axpy(f, &cur, &neg, &self.rows[pi].1);
                k = cur.partition_point(|(cc, _)| *cc <= c);
            } else {
                k += 1;
            }
        }
        cur
    }

    /// Coefficient of `v` on each stored row, assuming `v` lies in the span.
    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let coords: Vec<F::Elem> = self
            .rows
            .iter()
            .map(|(c, _)| {
                v.binary_search_by_key(c, |(cc, _)| *cc)
                    .map(|i| v[i].1.clone())
                    .unwrap_or_else(|_| f.zero())
            })
            .collect();
        let rest = self.reduce(v);
        if rest.is_empty() {
            Some(coords)
        } else {
            None
        }
    }

    /// Adds `v` to the span. Returns `true` when `v` was independent.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        let f = self.field.clone();
        let red = self.reduce(&v);
        let Some((c, lead)) = red.first().cloned() else {
            return false;
        };
        let inv = f.inv(&lead).expect("nonzero");
        let new_row: SparseVec<F::Elem> = red.iter().map(|(j, x)| (*j, f.mul(x, &inv))).collect();
        for (_, row) in self.rows.iter_mut() {
            if let Ok(i) = row.binary_search_by_key(&c, |(cc, _)| *cc) {
                let neg = f.neg(&row[i].1);
                *row = axpy(&f, row, &neg, &new_row);
            }
        }
        let pos = self.rows.partition_point(|(pc, _)| *pc < c);
        self.rows.insert(pos, (c, new_row));
        self.pivot_index = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, (pc, _))| (*pc, i))
            .collect();
        true
    }

    /// Basis of `{x : r . x = 0 for every stored row r}` as dense vectors,
    /// one per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if self.pivot_index.contains_key(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.ncols];
            v[free] = f.one();
            for (pc, row) in &self.rows {
                if let Ok(i) = row.binary_search_by_key(&free, |(cc, _)| *cc) {
                    v[*pc] = f.neg(&row[i].1);
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn dense_to_sparse<F: Field>(f: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !f.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense<F: Field>(f: &F, v: &[(usize, F::Elem)], n: usize) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Scales a rational vector to a primitive integer vector with positive
/// leading entry.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let sparse: SparseVec<BigRational> = dense_to_sparse(&Rationals, v);
    let mut prim = primitive_integer_row(sparse);
    if prim.first().map(|(_, x)| x.is_negative()).unwrap_or(false) {
        for (_, x) in prim.iter_mut() {
            *x = -&*x;
        }
    }
    let mut out = vec![BigInt::zero(); v.len()];
    for (i, x) in prim {
        out[i] = x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    #[test]
    fn empty_matrix() {
        let m = SparseMatrix::zero(Rationals, 0, 0);
        let (r, k) = m.rank_kernel();
        assert_eq!((r, k.len()), (0, 0));
        let m = SparseMatrix::zero(Rationals, 0, 3);
        let (r, k) = m.rank_kernel();
        assert_eq!((r, k.len()), (0, 3));
    }

    #[test]
    fn identity_full_rank() {
        let m = SparseMatrix::identity(Rationals, 2);
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 2);
        assert!(k.is_empty());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_one_kernel_direction() {
        let m = SparseMatrix::from_dense(Rationals, &[vec![q(1), q(2)], vec![q(2), q(4)]], 2).unwrap();
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        let v = &k[0];
        assert_eq!(&v[0] * q(-1), &v[1] * q(2));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn compose_cancellation_and_shape() {
        let a = SparseMatrix::from_dense(Rationals, &[vec![q(1), q(1)]], 2).unwrap();
        let b = SparseMatrix::from_dense(Rationals, &[vec![q(1)], vec![q(-1)]], 1).unwrap();
        let c = compose(&a, &b).unwrap();
        assert_eq!((c.nrows(), c.ncols()), (1, 1));
        assert_eq!(c.nnz(), 0);
        assert!(compose(&a, &a).is_err());
        let id = SparseMatrix::identity(Rationals, 2);
        assert_eq!(compose(&a, &id).unwrap(), a);
    }

    #[test]
    fn from_triplets_merges_duplicates() {
        let m = SparseMatrix::from_triplets(
            Rationals,
            2,
            2,
            vec![(0, 0, q(1)), (0, 0, q(-1)), (1, 1, q(3)), (1, 1, q(2))],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), q(5));
        assert!(SparseMatrix::from_triplets(Rationals, 1, 1, vec![(1, 0, q(1))]).is_err());
    }

    #[test]
    fn rref_reduce_and_coordinates() {
        let f = PrimeField::default();
        let rows = vec![vec![(0, 1u32), (2, 3)], vec![(1, 1), (2, 5)]];
        let rref = Rref::from_rows(f, 3, rows);
        assert_eq!(rref.rank(), 2);
        let v = vec![(0, 2u32), (1, 1), (2, 11)];
        let c = rref.coordinates(&v).unwrap();
        assert_eq!(c, vec![2, 1]);
        assert!(rref.coordinates(&[(2, 1)]).is_none());
    }

    #[test]
    fn fraction_free_matches_fraction_rank() {
        let rows = vec![
            vec![(0, q(2)), (1, q(4)), (2, q(6))],
            vec![(0, q(3)), (1, q(6)), (2, q(9))],
            vec![(1, q(1)), (2, q(1))],
        ];
        assert_eq!(fraction_free_rank(rows.clone(), 3), 2);
        assert_eq!(field_rank(&Rationals, rows, 3), 2);
    }
}
