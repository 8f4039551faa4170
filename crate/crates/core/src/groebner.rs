//! Buchberger's algorithm with the Gebauer–Möller pair update (product and
//! chain criteria), normal forms, standard monomials, elimination and
//! linear substitution.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hilbert::{self, HilbertPolynomial};
use crate::poly::{monomials_of_degree, Monomial, MonomialOrder, PolyRing, Polynomial};

/// A reduced Gröbner basis: monic, auto-reduced, sorted by ascending
/// leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: PolyRing<F>,
    polys: Vec<Polynomial<F::Elem>>,
    generators: Vec<Polynomial<F::Elem>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }
    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }
    pub fn polys(&self) -> &[Polynomial<F::Elem>] {
        &self.polys
    }
    /// The generators the basis was computed from.
    pub fn generators(&self) -> &[Polynomial<F::Elem>] {
        &self.generators
    }
    pub fn len(&self) -> usize {
        self.polys.len()
    }
    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| p.leading_monomial().expect("nonzero"))
            .collect()
    }

    /// Remainder of `f` modulo the basis: no term is divisible by a leading
    /// monomial.
    pub fn normal_form(&self, f: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        full_reduce(&self.ring, f, &self.polys)
    }

    pub fn contains(&self, f: &Polynomial<F::Elem>) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Whether 1 lies in the ideal.
    pub fn is_unit_ideal(&self) -> bool {
        self.polys
            .iter()
            .any(|p| p.leading_monomial().map(|m| m.degree() == 0).unwrap_or(false))
    }

    /// Degree-`d` monomials outside the leading-term ideal, in descending
    /// order; a basis of the degree-`d` piece of the quotient.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        let lts = self.leading_monomials();
        let mut out: Vec<Monomial> = monomials_of_degree(self.ring.nvars(), d)
            .into_iter()
            .filter(|m| !lts.iter().any(|lt| lt.divides(m)))
            .collect();
        out.sort_by(|a, b| self.ring.cmp(b, a));
        out
    }

    pub fn hilbert_function(&self, d: u32) -> u64 {
        hilbert::hilbert_function_of_monomials(&self.leading_monomials(), self.ring.nvars(), d)
    }

    pub fn hilbert_polynomial(&self) -> Result<HilbertPolynomial> {
        let max_deg = self.generators.iter().filter_map(|g| g.degree()).max().unwrap_or(1);
        hilbert::interpolate_hilbert_polynomial(
            &self.leading_monomials(),
            self.ring.nvars(),
            max_deg,
            self.generators.len(),
        )
    }

    /// Checks that every S-polynomial reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let s = s_polynomial(&self.ring, &self.polys[i], &self.polys[j]);
                if !self.normal_form(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// No leading monomial divides any term of another basis element.
    pub fn is_auto_reduced(&self) -> bool {
        let lts = self.leading_monomials();
        self.polys.iter().enumerate().all(|(i, p)| {
            p.terms().iter().all(|(m, _)| {
                lts.iter()
                    .enumerate()
                    .all(|(j, lt)| j == i || !lt.divides(m))
            })
        })
    }
}

/// Reduced Gröbner basis of a homogeneous ideal. Non-homogeneous
/// generators are rejected so that every graded computation stays exact.
pub fn buchberger<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
) -> Result<GroebnerBasis<F>> {
    if let Some(bad) = gens.iter().find(|g| !g.is_homogeneous()) {
        return Err(Error::NonHomogeneous(ring.format(bad)));
    }
    Ok(groebner_basis_any(ring, gens))
}

fn s_polynomial<F: Field>(
    ring: &PolyRing<F>,
    a: &Polynomial<F::Elem>,
    b: &Polynomial<F::Elem>,
) -> Polynomial<F::Elem> {
    let f = ring.field();
    let (la, ca) = a.leading().expect("nonzero");
    let (lb, cb) = b.leading().expect("nonzero");
    let l = la.lcm(lb);
    let ta = la.quotient_of(&l);
    let tb = lb.quotient_of(&l);
    let left = ring.mul_term(a, &ta, &f.inv(ca).expect("nonzero"));
    let cinv = f.neg(&f.inv(cb).expect("nonzero"));
    ring.merge(&left, &cinv, &tb, b)
}

/// Full reduction of `p` by monic `basis` elements.
fn full_reduce<F: Field>(
    ring: &PolyRing<F>,
    p: &Polynomial<F::Elem>,
    basis: &[Polynomial<F::Elem>],
) -> Polynomial<F::Elem> {
    let f = ring.field();
    let lts: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap()).collect();
    let mut remainder: Vec<(Monomial, F::Elem)> = Vec::new();
    let mut cur: Vec<(Monomial, F::Elem)> = p.terms().to_vec();
    let mut start = 0;
    while start < cur.len() {
        let (m, c) = cur[start].clone();
        match lts.iter().position(|lt| lt.divides(&m)) {
            Some(gi) => {
                let g = &basis[gi];
                let q = lts[gi].quotient_of(&m);
                // g is monic; the leading terms cancel exactly.
                let factor = if f.is_one(&g.terms()[0].1) {
                    f.neg(&c)
                } else {
                    f.neg(&f.div(&c, &g.terms()[0].1))
                };
                cur = ring.merge_terms(&cur[start + 1..], &factor, &q, &g.terms()[1..]);
                start = 0;
            }
            None => {
                remainder.push((m, c));
                start += 1;
            }
        }
    }
    ring.from_sorted_terms(remainder)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Buchberger over any input (used internally by elimination, where affine
/// sanity inputs occur).
pub(crate) fn groebner_basis_any<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
) -> GroebnerBasis<F> {
    let mut basis: Vec<Polynomial<F::Elem>> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Polynomial<F::Elem>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    inputs.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| ring.cmp(&a.leading_monomial().unwrap(), &b.leading_monomial().unwrap()))
    });

    for g in inputs {
        let active_polys: Vec<Polynomial<F::Elem>> = active_elements(&basis, &active);
        let h = full_reduce(ring, &g, &active_polys);
        if h.is_zero() {
            continue;
        }
        let sugar = g.degree().unwrap_or(0);
        add_to_basis::<F>(&mut basis, &mut sugars, &mut active, &mut pairs, ring.monic(&h), sugar);
    }

    while !pairs.is_empty() {
        let idx = select_pair(ring, &pairs);
        let pair = pairs.swap_remove(idx);
        let s = s_polynomial(ring, &basis[pair.i], &basis[pair.j]);
        let active_polys = active_elements(&basis, &active);
        let h = full_reduce(ring, &s, &active_polys);
        if h.is_zero() {
            continue;
        }
        add_to_basis::<F>(&mut basis, &mut sugars, &mut active, &mut pairs, ring.monic(&h), pair.sugar);
    }

    let reduced = interreduce(ring, active_elements(&basis, &active));
    GroebnerBasis {
        ring: ring.clone(),
        polys: reduced,
        generators: gens.to_vec(),
    }
}

fn active_elements<E: Clone>(basis: &[Polynomial<E>], active: &[bool]) -> Vec<Polynomial<E>> {
    basis
        .iter()
        .zip(active)
        .filter(|(_, a)| **a)
        .map(|(p, _)| p.clone())
        .collect()
}

fn select_pair<F: Field>(ring: &PolyRing<F>, pairs: &[Pair]) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let a = &pairs[k];
        let b = &pairs[best];
        let ord = a
            .sugar
            .cmp(&b.sugar)
            .then_with(|| ring.cmp(&a.lcm, &b.lcm))
            .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
        if ord == Ordering::Less {
            best = k;
        }
    }
    best
}

/// Gebauer–Möller update.
fn add_to_basis<F: Field>(
    basis: &mut Vec<Polynomial<F::Elem>>,
    sugars: &mut Vec<u32>,
    active: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
    h: Polynomial<F::Elem>,
    sugar: u32,
) {
    let k = basis.len();
    let lt_h = h.leading_monomial().unwrap();
    let pair_sugar = |i: usize, l: &Monomial, basis: &[Polynomial<F::Elem>]| -> u32 {
        let lt_i = basis[i].leading_monomial().unwrap();
        let si = sugars[i] + l.degree() - lt_i.degree();
        let sh = sugar + l.degree() - lt_h.degree();
        si.max(sh)
    };

    let mut candidates: Vec<(usize, Monomial)> = (0..k)
        .filter(|&i| active[i])
        .map(|i| (i, basis[i].leading_monomial().unwrap().lcm(&lt_h)))
        .collect();
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    while let Some((i, l)) = candidates.pop() {
        let coprime = basis[i].leading_monomial().unwrap().is_coprime(&lt_h);
        let dominated = candidates
            .iter()
            .chain(kept.iter())
            .any(|(_, l2)| l2.divides(&l));
        if coprime || !dominated {
            kept.push((i, l));
        }
    }
    let new_pairs: Vec<Pair> = kept
        .into_iter()
        .filter(|(i, _)| !basis[*i].leading_monomial().unwrap().is_coprime(&lt_h))
        .map(|(i, l)| Pair {
            i,
            j: k,
            sugar: pair_sugar(i, &l, basis),
            lcm: l,
        })
        .collect();

    pairs.retain(|p| {
        if !lt_h.divides(&p.lcm) {
            return true;
        }
        let li = basis[p.i].leading_monomial().unwrap().lcm(&lt_h);
        let lj = basis[p.j].leading_monomial().unwrap().lcm(&lt_h);
        li == p.lcm || lj == p.lcm
    });
    pairs.extend(new_pairs);

    for i in 0..k {
        if active[i] && lt_h.divides(&basis[i].leading_monomial().unwrap()) {
            active[i] = false;
        }
    }
    basis.push(h);
    sugars.push(sugar);
    active.push(true);
}

fn interreduce<F: Field>(
    ring: &PolyRing<F>,
    mut polys: Vec<Polynomial<F::Elem>>,
) -> Vec<Polynomial<F::Elem>> {
    polys.sort_by(|a, b| ring.cmp(&a.leading_monomial().unwrap(), &b.leading_monomial().unwrap()));
    // drop elements whose leading monomial is divisible by another's
    let lts: Vec<Monomial> = polys.iter().map(|p| p.leading_monomial().unwrap()).collect();
    let keep: Vec<bool> = (0..polys.len())
        .map(|i| {
            !(0..polys.len()).any(|j| {
                j != i && lts[j].divides(&lts[i]) && (lts[j] != lts[i] || j < i)
            })
        })
        .collect();
    let minimal: Vec<Polynomial<F::Elem>> = polys
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect();
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial<F::Elem>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let lead = minimal[i].terms()[0].clone();
        let tail = ring.from_sorted_terms(minimal[i].terms()[1..].to_vec());
        let tail_red = full_reduce(ring, &tail, &others);
        let mut terms = vec![lead];
        terms.extend(tail_red.into_terms());
        out.push(ring.monic(&ring.from_sorted_terms(terms)));
    }
    out
}

/// Generators of the elimination ideal `I ∩ k[kept variables]`, computed
/// with an elimination-block order. `eliminate_vars` lists the variables to
/// remove; the returned polynomials live in the original ring and involve
/// only the kept variables. Non-homogeneous input is accepted here.
pub fn eliminate<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
    eliminate_vars: &[usize],
) -> Vec<Polynomial<F::Elem>> {
    let n = ring.nvars();
    if eliminate_vars.is_empty() {
        let gb = groebner_basis_any(&ring.with_order(MonomialOrder::Grevlex), gens);
        return gb.polys;
    }
    // permutation: eliminated variables first, then kept ones in order
    let mut perm = vec![usize::MAX; n];
    let mut slot = 0;
    for &v in eliminate_vars {
        perm[v] = slot;
        slot += 1;
    }
    for (v, p) in perm.iter_mut().enumerate() {
        if *p == usize::MAX {
            *p = slot;
            slot += 1;
        }
        let _ = v;
    }
    let mut inverse = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let k = eliminate_vars.len();
    let elim_ring = PolyRing::new(ring.field().clone(), n, MonomialOrder::EliminationBlock { k });
    let moved: Vec<Polynomial<F::Elem>> = gens
        .iter()
        .map(|g| {
            elim_ring.from_terms(g.terms().iter().map(|(m, c)| (m.permute(&perm), c.clone())).collect())
        })
        .collect();
    let gb = groebner_basis_any(&elim_ring, &moved);
    let kept: Vec<Polynomial<F::Elem>> = gb
        .polys
        .iter()
        .filter(|p| p.terms().iter().all(|(m, _)| (0..k).all(|i| m.exp(i) == 0)))
        .map(|p| {
            ring.from_terms(
                p.terms()
                    .iter()
                    .map(|(m, c)| (m.permute(&inverse), c.clone()))
                    .collect(),
            )
        })
        .collect();
    kept
}

/// Substitutes for each variable of `ring` a homogeneous linear form of
/// `target`. Images of any other shape are rejected.
pub fn substitute_linear<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
    target: &PolyRing<F>,
    images: &[Polynomial<F::Elem>],
) -> Result<Vec<Polynomial<F::Elem>>> {
    if images.len() != ring.nvars() {
        return Err(Error::Shape(format!(
            "{} images for {} variables",
            images.len(),
            ring.nvars()
        )));
    }
    for img in images {
        if !img.terms().iter().all(|(m, _)| m.degree() == 1) {
            return Err(Error::NonLinearImage(target.format(img)));
        }
    }
    Ok(gens
        .iter()
        .map(|g| ring.substitute(g, target, images))
        .collect())
}

/// Convenience: Hilbert polynomial of the ideal generated by rational
/// generators, computed over the given field.
pub fn hilbert_polynomial_of<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<BigRational>],
) -> Result<HilbertPolynomial> {
    let mapped = gens
        .iter()
        .map(|g| ring.from_rational_poly(g))
        .collect::<Result<Vec<_>>>()?;
    buchberger(ring, &mapped)?.hilbert_polynomial()
}
