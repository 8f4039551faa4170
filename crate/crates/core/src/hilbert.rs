//! Hilbert functions of monomial ideals and interpolated Hilbert polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Monomial;

const WINDOW_CAP: u32 = 20;
const WIDEN_STEP: u32 = 10;
const MAX_ATTEMPTS: u32 = 4;
const EXTRA_CHECKS: u32 = 3;

/// Numerator of the Hilbert series of `S/J`, `S` in `nvars` variables, as
/// integer coefficients of `1, t, t², ...`; the series is `N(t)/(1−t)^nvars`.
pub fn hilbert_series_numerator(gens: &[Monomial], nvars: usize) -> Vec<i64> {
    let mut gens = minimalize(gens.to_vec());
    gens.sort_by_key(|m| m.degree());
    numerator_rec(gens, nvars)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|o| o.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, y) in b.iter().enumerate() {
        a[i + shift] += y;
    }
}

fn numerator_rec(gens: Vec<Monomial>, nvars: usize) -> Vec<i64> {
    // pivot on a variable shared by two generators, if any
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        for (i, c) in counts.iter_mut().enumerate() {
            if g.exp(i) > 0 {
                *c += 1;
            }
        }
    }
    let pivot = (0..nvars).filter(|&i| counts[i] >= 2).max_by_key(|&i| counts[i]);
    let Some(x) = pivot else {
        let mut acc = vec![1i64];
        for g in &gens {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    };
    let xv = Monomial::var(x);
    let mut with_x = gens.clone();
    with_x.push(xv);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| if xv.divides(g) { xv.quotient_of(g) } else { *g })
        .collect();
    let mut out = numerator_rec(minimalize(with_x), nvars);
    let tail = numerator_rec(minimalize(colon), nvars);
    poly_add_shifted(&mut out, &tail, 1);
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Dimension of the degree-`d` piece of `S/J`.
pub fn hilbert_function_of_monomials(gens: &[Monomial], nvars: usize, d: u32) -> u64 {
    let num = hilbert_series_numerator(gens, nvars);
    hilbert_function_from_numerator(&num, nvars, d)
}

pub fn hilbert_function_from_numerator(num: &[i64], nvars: usize, d: u32) -> u64 {
    if nvars == 0 {
        return num.get(d as usize).copied().unwrap_or(0).max(0) as u64;
    }
    let n = nvars as i64;
    let total: i128 = num
        .iter()
        .enumerate()
        .map(|(k, c)| *c as i128 * binomial(d as i64 - k as i64 + n - 1, n - 1))
        .sum();
    total.to_u64().expect("nonnegative Hilbert function")
}

/// A polynomial in one variable `m` with rational coefficients, constant
/// term first.
#[derive(Clone, Debug)]
pub struct HilbertPolynomial {
    coeffs: Vec<BigRational>,
    /// First degree from which the Hilbert function was checked to agree.
    stabilized_from: u32,
}

impl HilbertPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        HilbertPolynomial {
            coeffs,
            stabilized_from: 0,
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn stabilized_from(&self) -> u32 {
        self.stabilized_from
    }

    /// Degree of the polynomial, which is the projective dimension of the
    /// scheme. `None` for the zero polynomial (empty scheme).
    pub fn dimension(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Leading coefficient times `dim!`.
    pub fn degree(&self) -> u64 {
        let Some(dim) = self.dimension() else {
            return 0;
        };
        let mut fact = BigInt::one();
        for i in 2..=dim {
            fact *= BigInt::from(i);
        }
        let d = &self.coeffs[dim] * BigRational::from_integer(fact);
        d.to_integer().to_u64().expect("positive integer degree")
    }

    pub fn eval(&self, m: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(m));
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    /// Arithmetic genus of a curve, `1 − P(0)`.
    pub fn genus(&self) -> i64 {
        (BigRational::one() - self.eval(0))
            .to_integer()
            .to_i64()
            .expect("small genus")
    }
}

impl PartialEq for HilbertPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for HilbertPolynomial {}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "m")?,
                _ => write!(f, "m^{k}")?,
            }
        }
        Ok(())
    }
}

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Newton interpolation through `values[i] = f(start + i)`; returns
/// coefficients in `m` of the unique polynomial of degree `< values.len()`.
fn newton_interpolate(start: i64, values: &[i128]) -> Vec<BigRational> {
    let mut diffs: Vec<BigRational> = values.iter().map(|v| rat(*v)).collect();
    let mut leading = Vec::with_capacity(values.len());
    for _ in 0..values.len() {
        leading.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diffs.is_empty() {
            break;
        }
    }
    // Σ Δ^k f(start) · C(m − start, k)
    let mut out = vec![BigRational::zero(); values.len()];
    let mut basis = vec![BigRational::one()];
    for (k, c) in leading.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            out[i] += c * b;
        }
        // basis *= (m − start − k)/(k+1)
        let shift = rat(-(start as i128) - k as i128);
        let denom = rat(k as i128 + 1);
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b / &denom;
            next[i] += b * &shift / &denom;
        }
        basis = next;
    }
    out
}

/// Interpolates the Hilbert polynomial of `S/J`. Sampling starts at
/// `D = min(max generator degree · #generators, 20)`; the polynomial degree
/// is detected by finite differences, `dim + 2` points are interpolated and
/// three further points are checked. On a mismatch the window moves up.
pub fn interpolate_hilbert_polynomial(
    leading: &[Monomial],
    nvars: usize,
    max_gen_degree: u32,
    num_gens: usize,
) -> Result<HilbertPolynomial> {
    let num = hilbert_series_numerator(leading, nvars);
    let hf = |d: u32| hilbert_function_from_numerator(&num, nvars, d) as i128;
    let mut start = (max_gen_degree.max(1) * num_gens.max(1) as u32).min(WINDOW_CAP);
    for _ in 0..MAX_ATTEMPTS {
        // degree is at most nvars − 1, so nvars + 1 samples pin it down
        let samples: Vec<i128> = (0..=nvars as u32).map(|i| hf(start + i)).collect();
        let mut diffs = samples.clone();
        let mut dim: i64 = -1;
        for k in 0..samples.len() {
            if diffs.iter().any(|v| *v != 0) {
                dim = k as i64;
            }
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
            if diffs.is_empty() {
                break;
            }
        }
        // dim + 2 points determine and over-check a degree-dim polynomial
        let used = (dim + 2).max(1) as usize;
        let coeffs = newton_interpolate(start as i64, &samples[..used.min(samples.len())]);
        let poly = HilbertPolynomial::from_coeffs(coeffs);
        let top = start + used as u32;
        let ok = (0..EXTRA_CHECKS + samples.len() as u32 - used.min(samples.len()) as u32)
            .all(|i| poly.eval((top + i) as i64) == rat(hf(top + i)));
        if ok {
            return Ok(HilbertPolynomial {
                stabilized_from: start,
                ..poly
            });
        }
        start += WIDEN_STEP;
    }
    Err(Error::NotStabilized(format!(
        "no agreement up to degree {start}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn free_ring_counts() {
        assert_eq!(hilbert_function_of_monomials(&[], 4, 2), 10);
        let hp = interpolate_hilbert_polynomial(&[], 3, 1, 1).unwrap();
        // C(m+2, 2) = (m² + 3m + 2)/2
        for m in 0..6 {
            assert_eq!(hp.eval(m), rat(((m + 2) * (m + 1) / 2) as i128));
        }
        assert_eq!(hp.dimension(), Some(2));
        assert_eq!(hp.degree(), 1);
    }

    #[test]
    fn twisted_cubic_leading_terms() {
        // grevlex leading terms of the twisted cubic: x1², x1x2, x2²
        let lts = [mono(&[0, 2, 0, 0]), mono(&[0, 1, 1, 0]), mono(&[0, 0, 2, 0])];
        for m in 1..=5 {
            assert_eq!(hilbert_function_of_monomials(&lts, 4, m), 3 * m as u64 + 1);
        }
        let hp = interpolate_hilbert_polynomial(&lts, 4, 2, 3).unwrap();
        assert_eq!(hp.to_string(), "3m + 1");
        assert_eq!(hp.genus(), 0);
        assert_eq!(hp.degree(), 3);
    }

    #[test]
    fn numerator_of_complete_intersection() {
        // (x², y³) in 2 variables: (1−t²)(1−t³)
        let n = hilbert_series_numerator(&[mono(&[2, 0]), mono(&[0, 3])], 2);
        assert_eq!(n, vec![1, 0, -1, -1, 0, 1]);
    }

    #[test]
    fn numerator_matches_direct_count() {
        let gens = [mono(&[1, 1, 0]), mono(&[0, 1, 1]), mono(&[2, 0, 1])];
        for d in 0..8 {
            let direct = crate::poly::monomials_of_degree(3, d)
                .into_iter()
                .filter(|m| !gens.iter().any(|g| g.divides(m)))
                .count() as u64;
            assert_eq!(hilbert_function_of_monomials(&gens, 3, d), direct);
        }
    }

    #[test]
    fn display_forms() {
        let p = HilbertPolynomial::from_coeffs(vec![rat(-1), rat(7)]);
        assert_eq!(p.to_string(), "7m - 1");
        assert_eq!(p.genus(), 2);
        let z = HilbertPolynomial::from_coeffs(vec![rat(0), rat(5)]);
        assert_eq!(z.to_string(), "5m");
    }
}
