//! Graded multivariate polynomials over a [`Field`] with a fixed monomial
//! order, plus the plain-text syntax `3*x0^2*x1 - x2^3`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};

/// Upper bound on the number of variables of any ring in the crate.
pub const MAX_VARS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
            deg: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::one();
        for (i, e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(*e).expect("exponent overflow");
        }
        m.deg = exps.iter().sum::<u32>() as u16;
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|e| *e as u32).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, slot) in exps.iter_mut().enumerate() {
            *slot = self.exps[i]
                .checked_add(other.exps[i])
                .expect("exponent overflow");
        }
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let mut exps = [0u8; MAX_VARS];
        for (i, slot) in exps.iter_mut().enumerate() {
            *slot = other.exps[i] - self.exps[i];
        }
        Monomial {
            exps,
            deg: other.deg - self.deg,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        let mut deg = 0u16;
        for (i, slot) in exps.iter_mut().enumerate() {
            *slot = self.exps[i].max(other.exps[i]);
            deg += *slot as u16;
        }
        Monomial { exps, deg }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        let mut deg = 0u16;
        for (i, slot) in exps.iter_mut().enumerate() {
            *slot = self.exps[i].min(other.exps[i]);
            deg += *slot as u16;
        }
        Monomial { exps, deg }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Moves exponent `i` to slot `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, &j) in perm.iter().enumerate() {
            exps[j] = self.exps[i];
        }
        Monomial {
            exps,
            deg: self.deg,
        }
    }

    pub fn format(&self, nvars: usize) -> String {
        let mut parts = Vec::new();
        for i in 0..nvars {
            match self.exps[i] {
                0 => {}
                1 => parts.push(format!("x{i}")),
                e => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = (0..MAX_VARS).rev().find(|&i| self.exps[i] != 0).map_or(0, |i| i + 1);
        write!(f, "{}", self.format(last))
    }
}

/// All monomials of degree `d` in `nvars` variables, in descending grevlex
/// order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if n == 0 {
            if left == 0 {
                out.push(Monomial::one());
            }
            return;
        }
        if i == n - 1 {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    rec(0, d, &mut exps, &mut out);
    let ord = MonomialOrder::Grevlex;
    out.sort_by(|a, b| ord.cmp(b, a));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    /// Graded reverse lexicographic with `x0 > x1 > ...`.
    Grevlex,
    /// Compares the total degree in the first `k` variables, then grevlex.
    /// Eliminates exactly `x0..x{k-1}`.
    EliminationBlock { k: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::EliminationBlock { k } => {
                let da: u32 = a.exps[..*k].iter().map(|e| *e as u32).sum();
                let db: u32 = b.exps[..*k].iter().map(|e| *e as u32).sum();
                da.cmp(&db).then_with(|| grevlex(a, b))
            }
        }
    }
}

fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.deg.cmp(&b.deg).then_with(|| {
        for i in (0..MAX_VARS).rev() {
            if a.exps[i] != b.exps[i] {
                return b.exps[i].cmp(&a.exps[i]);
            }
        }
        Ordering::Equal
    })
}

/// Terms sorted strictly descending in the owning ring's order, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E> Polynomial<E> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }
    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }
    pub fn into_terms(self) -> Vec<(Monomial, E)> {
        self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn leading(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }
    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|(m, _)| *m)
    }
    /// Total degree of the leading term (all terms for homogeneous input).
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.deg == m.deg),
        }
    }
}

/// A polynomial ring `k[x0..x{n-1}]` with a monomial order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, nvars: usize, order: MonomialOrder) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        if let MonomialOrder::EliminationBlock { k } = order {
            assert!(k <= nvars);
        }
        PolyRing {
            field,
            nvars,
            order,
        }
    }

    pub fn grevlex(field: F, nvars: usize) -> Self {
        Self::new(field, nvars, MonomialOrder::Grevlex)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        Self::new(self.field.clone(), self.nvars, order)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Sorts, merges equal monomials and drops zeros.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F::Elem> {
        let f = &self.field;
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = f.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !f.is_zero(c));
        Polynomial { terms: out }
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F::Elem> {
        self.from_terms(vec![(Monomial::one(), c)])
    }

    pub fn one(&self) -> Polynomial<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn var(&self, i: usize) -> Polynomial<F::Elem> {
        assert!(i < self.nvars);
        Polynomial {
            terms: vec![(Monomial::var(i), self.field.one())],
        }
    }

    pub fn monomial(&self, m: Monomial) -> Polynomial<F::Elem> {
        Polynomial {
            terms: vec![(m, self.field.one())],
        }
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear_form(&self, coeffs: &[F::Elem]) -> Polynomial<F::Elem> {
        self.from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(i), c.clone()))
                .collect(),
        )
    }

    /// Re-sorts a polynomial produced under another order.
    pub fn reorder(&self, p: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.from_terms(p.terms.clone())
    }

    pub fn add(&self, a: &Polynomial<F::Elem>, b: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.merge(a, &self.field.one(), &Monomial::one(), b)
    }

    pub fn sub(&self, a: &Polynomial<F::Elem>, b: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.merge(a, &self.field.neg(&self.field.one()), &Monomial::one(), b)
    }

    pub fn neg(&self, a: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (*m, self.field.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, a: &Polynomial<F::Elem>, c: &F::Elem) -> Polynomial<F::Elem> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(m, x)| (*m, self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul_term(
        &self,
        a: &Polynomial<F::Elem>,
        m: &Monomial,
        c: &F::Elem,
    ) -> Polynomial<F::Elem> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        // Monomial orders are multiplicative, so the order is preserved.
        Polynomial {
            terms: a
                .terms
                .iter()
                .map(|(t, x)| (t.mul(m), self.field.mul(x, c)))
                .collect(),
        }
    }

    /// `a + c * m * b`, merging sorted term lists.
    pub fn merge(
        &self,
        a: &Polynomial<F::Elem>,
        c: &F::Elem,
        m: &Monomial,
        b: &Polynomial<F::Elem>,
    ) -> Polynomial<F::Elem> {
        Polynomial {
            terms: self.merge_terms(&a.terms, c, m, &b.terms),
        }
    }

    pub(crate) fn merge_terms(
        &self,
        a: &[(Monomial, F::Elem)],
        c: &F::Elem,
        m: &Monomial,
        b: &[(Monomial, F::Elem)],
    ) -> Vec<(Monomial, F::Elem)> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let bj = b.get(j).map(|(t, _)| t.mul(m));
            let ord = match (a.get(i), &bj) {
                (Some((ta, _)), Some(tb)) => self.order.cmp(ta, tb),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bj.unwrap(), f.mul(c, &b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
                    if !f.is_zero(&v) {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub(crate) fn from_sorted_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F::Elem> {
        debug_assert!(terms.windows(2).all(|w| self.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial { terms }
    }

    pub fn mul(&self, a: &Polynomial<F::Elem>, b: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        let mut acc = Polynomial::zero();
        for (m, c) in &b.terms {
            acc = self.merge(&acc, c, m, a);
        }
        acc
    }

    pub fn pow(&self, a: &Polynomial<F::Elem>, e: u32) -> Polynomial<F::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, a: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        match a.terms.first() {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero");
                self.scale(a, &inv)
            }
        }
    }

    /// Substitutes `images[i]` (polynomials of `target`) for `x_i`.
    pub fn substitute(
        &self,
        p: &Polynomial<F::Elem>,
        target: &PolyRing<F>,
        images: &[Polynomial<F::Elem>],
    ) -> Polynomial<F::Elem> {
        assert_eq!(images.len(), self.nvars);
        let mut power_cache: Vec<Vec<Polynomial<F::Elem>>> =
            images.iter().map(|img| vec![target.one(), img.clone()]).collect();
        let mut acc = Polynomial::zero();
        for (m, c) in &p.terms {
            let mut term = target.constant(c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while power_cache[i].len() <= e {
                    let next = target.mul(power_cache[i].last().unwrap(), &images[i]);
                    power_cache[i].push(next);
                }
                term = target.mul(&term, &power_cache[i][e]);
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    /// Evaluates at a point.
    pub fn evaluate(&self, p: &Polynomial<F::Elem>, point: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        p.terms.iter().fold(f.zero(), |acc, (m, c)| {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate().take(self.nvars) {
                for _ in 0..m.exp(i) {
                    v = f.mul(&v, x);
                }
            }
            f.add(&acc, &v)
        })
    }

    pub fn format(&self, p: &Polynomial<F::Elem>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut s = String::new();
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let neg = f.is_negative(c);
            let abs = if neg { f.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.format(self.nvars);
            if m.degree() == 0 {
                s.push_str(&f.format(&abs));
            } else if f.is_one(&abs) {
                s.push_str(&mono);
            } else {
                s.push_str(&f.format(&abs));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }

    /// Parses the text syntax. Rational coefficients are mapped into the
    /// field.
    pub fn parse(&self, text: &str) -> Result<Polynomial<F::Elem>> {
        let q = parse_rational_terms(text, self.nvars)?;
        let mut terms = Vec::with_capacity(q.len());
        for (m, c) in q {
            terms.push((m, self.field.from_rational(&c)?));
        }
        Ok(self.from_terms(terms))
    }

    /// Maps a rational polynomial into this ring's field.
    pub fn from_rational_poly(&self, p: &Polynomial<BigRational>) -> Result<Polynomial<F::Elem>> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            terms.push((*m, self.field.from_rational(c)?));
        }
        Ok(self.from_terms(terms))
    }
}

impl PolyRing<Rationals> {
    /// Scales to integer coefficients with content 1 and positive leading
    /// coefficient.
    pub fn primitive(&self, p: &Polynomial<BigRational>) -> Polynomial<BigRational> {
        use num_integer::Integer;
        if p.is_zero() {
            return Polynomial::zero();
        }
        let mut lcm = BigInt::one();
        for (_, c) in p.terms() {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = p
            .terms()
            .iter()
            .map(|(_, c)| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        let sign = if ints[0] < BigInt::zero() { -1 } else { 1 };
        let g = g * sign;
        Polynomial {
            terms: p
                .terms()
                .iter()
                .zip(ints)
                .map(|((m, _), v)| (*m, BigRational::from_integer(v / &g)))
                .collect(),
        }
    }
}

fn parse_rational_terms(text: &str, nvars: usize) -> Result<Vec<(Monomial, BigRational)>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes = cleaned.as_bytes();
    let mut terms = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        } else if pos != 0 {
            return Err(Error::Parse(format!("expected + or - at offset {pos} in `{text}`")));
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            pos += 1;
        }
        let term = &cleaned[start..pos];
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in `{text}`")));
        }
        let mut coeff = BigRational::from_integer(sign);
        let mut exps = vec![0u32; nvars];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{term}`")));
            }
            if let Some(rest) = factor.strip_prefix('x') {
                let (idx, exp) = match rest.split_once('^') {
                    Some((i, e)) => (i, e),
                    None => (rest, "1"),
                };
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
                let exp: u32 = exp
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent `{factor}`")))?;
                if idx >= nvars {
                    return Err(Error::Parse(format!(
                        "variable x{idx} outside x0..x{}",
                        nvars.saturating_sub(1)
                    )));
                }
                exps[idx] += exp;
            } else {
                let value = match factor.split_once('/') {
                    Some((n, d)) => {
                        let n: BigInt = n
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad number `{factor}`")))?;
                        let d: BigInt = d
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad number `{factor}`")))?;
                        if d.is_zero() {
                            return Err(Error::Parse("zero denominator".into()));
                        }
                        BigRational::new(n, d)
                    }
                    None => BigRational::from_integer(
                        factor
                            .parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("bad factor `{factor}`")))?,
                    ),
                };
                coeff *= value;
            }
        }
        terms.push((Monomial::from_exponents(&exps), coeff));
    }
    Ok(terms)
}
