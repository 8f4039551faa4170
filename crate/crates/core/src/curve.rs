//! Function fields of Weierstrass curves `y² = f(x)` with `deg f = 2g+1`
//! and Riemann–Roch spaces `L(N·P∞)` at the point at infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// `y² = (x − r_1)…(x − r_{2g+1})` with distinct integer roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    pub genus: u32,
    pub roots: Vec<i64>,
}

/// `a(x) + y·b(x)`, coefficient vectors in increasing powers of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionElem<E> {
    pub a: Vec<E>,
    pub b: Vec<E>,
}

impl WeierstrassCurve {
    pub fn new(genus: u32, roots: Vec<i64>) -> Result<Self> {
        if genus == 0 || roots.len() != 2 * genus as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "genus {genus} needs {} roots, got {}",
                2 * genus + 1,
                roots.len()
            )));
        }
        let mut sorted = roots.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != roots.len() {
            return Err(Error::InvalidParameter("repeated root".into()));
        }
        Ok(WeierstrassCurve { genus, roots })
    }

    /// Whether `f` stays squarefree over the field.
    pub fn is_smooth_over<F: Field>(&self, field: &F) -> bool {
        let rs: Vec<F::Elem> = self.roots.iter().map(|r| field.from_i64(*r)).collect();
        (0..rs.len()).all(|i| (i + 1..rs.len()).all(|j| rs[i] != rs[j]))
    }

    fn y_pole(&self) -> u32 {
        2 * self.genus + 1
    }

    /// Pole orders of the basis of `L(N·P∞)` in increasing order; even
    /// orders are `x^i`, odd ones `y·x^j`.
    pub fn pole_orders(&self, n: i64) -> Vec<u32> {
        if n < 0 {
            return Vec::new();
        }
        (0..=n as u32)
            .filter(|o| o % 2 == 0 || *o >= self.y_pole())
            .collect()
    }

    pub fn dim_riemann_roch(&self, n: i64) -> usize {
        self.pole_orders(n).len()
    }

    /// The basis element of given pole order.
    pub fn basis_element<F: Field>(&self, field: &F, pole: u32) -> FunctionElem<F::Elem> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        if pole % 2 == 0 {
            a = vec![field.zero(); pole as usize / 2 + 1];
            a[pole as usize / 2] = field.one();
        } else {
            let j = ((pole - self.y_pole()) / 2) as usize;
            b = vec![field.zero(); j + 1];
            b[j] = field.one();
        }
        FunctionElem { a, b }
    }

    fn f_coeffs<F: Field>(&self, field: &F) -> Vec<F::Elem> {
        let mut acc = vec![field.one()];
        for r in &self.roots {
            let neg_r = field.from_i64(-r);
            let mut next = vec![field.zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], c);
                next[i] = field.add(&next[i], &field.mul(c, &neg_r));
            }
            acc = next;
        }
        acc
    }

    pub fn mul<F: Field>(
        &self,
        field: &F,
        u: &FunctionElem<F::Elem>,
        v: &FunctionElem<F::Elem>,
    ) -> FunctionElem<F::Elem> {
        let f = self.f_coeffs(field);
        let bb = poly_mul(field, &u.b, &v.b);
        let a = poly_add(field, &poly_mul(field, &u.a, &v.a), &poly_mul(field, &f, &bb));
        let b = poly_add(field, &poly_mul(field, &u.a, &v.b), &poly_mul(field, &u.b, &v.a));
        FunctionElem {
            a: trim(field, a),
            b: trim(field, b),
        }
    }

    pub fn combine<F: Field>(
        &self,
        field: &F,
        coeffs: &[F::Elem],
        elems: &[FunctionElem<F::Elem>],
    ) -> FunctionElem<F::Elem> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (c, e) in coeffs.iter().zip(elems) {
            if field.is_zero(c) {
                continue;
            }
            a = poly_add(field, &a, &scale(field, &e.a, c));
            b = poly_add(field, &b, &scale(field, &e.b, c));
        }
        FunctionElem {
            a: trim(field, a),
            b: trim(field, b),
        }
    }

    /// Sparse coordinates of `u` in the basis of `L(N·P∞)`; `None` when `u`
    /// has a pole of order above `N`.
    pub fn coordinates<F: Field>(
        &self,
        field: &F,
        u: &FunctionElem<F::Elem>,
        n: i64,
    ) -> Option<Vec<(usize, F::Elem)>> {
        let orders = self.pole_orders(n);
        let mut out = Vec::new();
        let mut push = |pole: u32, c: &F::Elem| -> bool {
            match orders.binary_search(&pole) {
                Ok(idx) => {
                    out.push((idx, c.clone()));
                    true
                }
                Err(_) => false,
            }
        };
        for (i, c) in u.a.iter().enumerate() {
            if !field.is_zero(c) && !push(2 * i as u32, c) {
                return None;
            }
        }
        for (j, c) in u.b.iter().enumerate() {
            if !field.is_zero(c) && !push(self.y_pole() + 2 * j as u32, c) {
                return None;
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Some(out)
    }
}

fn poly_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

fn poly_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn scale<F: Field>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(x, c)).collect()
}

fn trim<F: Field>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().map(|c| f.is_zero(c)).unwrap_or(false) {
        a.pop();
    }
    a
}
