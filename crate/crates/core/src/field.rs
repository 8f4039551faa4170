//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Fields are values (`Rationals`, `PrimeField { p }`) that carry any
//! context the arithmetic needs; elements are plain data. All algorithms in
//! the crate are generic over [`Field`].

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseVec;

/// Default prime for the fast path.
pub const DEFAULT_PRIME: u32 = 32003;

/// Which field a computation ran over. Recorded in every table and report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rational,
    Prime { p: u32 },
}

impl FieldDescriptor {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldDescriptor::Rational);
        }
        let body = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("FP:"))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}` (expected q or fp:<p>)")))?;
        let p: u32 = body
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime `{body}`")))?;
        PrimeField::new(p)?;
        Ok(FieldDescriptor::Prime { p })
    }
}

impl std::fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "QQ"),
            FieldDescriptor::Prime { p } => write!(f, "ZZ/{p}"),
        }
    }
}

pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn descriptor(&self) -> FieldDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Fails when the denominator is not invertible in the field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let inv = self.inv(b).expect("division by zero");
        self.mul(a, &inv)
    }

    /// `a - c*b`, the inner step of every elimination loop.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    /// Whether the printed form needs a sign (used by the polynomial printer).
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn format(&self, a: &Self::Elem) -> String;

    /// Rank of the span of `rows` (sorted sparse vectors of width `ncols`).
    fn rank_rows(&self, rows: Vec<SparseVec<Self::Elem>>, ncols: usize) -> usize {
        crate::linalg::field_rank(self, rows, ncols)
    }
}

/// The field of rational numbers. Elements are kept in lowest terms with a
/// positive denominator (guaranteed by `num_rational`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn rank_rows(&self, rows: Vec<SparseVec<BigRational>>, ncols: usize) -> usize {
        crate::linalg::fraction_free_rank(rows, ncols)
    }
}

/// `Z/p` for a prime `p < 2^31`. Residues live in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not a usable prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u64;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u32
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime { p: self.p }
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }
    fn from_bigint(&self, v: &BigInt) -> u32 {
        let m = v.mod_floor(&BigInt::from(self.p));
        m.to_u32().expect("residue fits in u32")
    }
    fn from_rational(&self, q: &BigRational) -> Result<u32> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        let inv = self.inv(&den).ok_or_else(|| {
            Error::BadReduction(format!("denominator of {q} vanishes mod {}", self.p))
        })?;
        Ok(self.mul(&num, &inv))
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p as u64 - 2))
        }
    }
    #[inline]
    fn sub_mul(&self, a: &u32, c: &u32, b: &u32) -> u32 {
        let prod = (*c as u64 * *b as u64) % self.p as u64;
        ((*a as u64 + self.p as u64 - prod) % self.p as u64) as u32
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
}

/// Runs `$body` with `$field` bound to the concrete field named by a
/// [`FieldDescriptor`].
#[macro_export]
macro_rules! with_field {
    ($desc:expr, |$field:ident| $body:expr) => {
        match $desc {
            $crate::field::FieldDescriptor::Rational => {
                let $field = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldDescriptor::Prime { p } => {
                let $field = $crate::field::PrimeField::new(p)?;
                $body
            }
        }
    };
}

/// Lowest-terms integer content helpers shared by the fraction-free code.
pub(crate) fn gcd_slice(values: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::default();
        for a in [1u32, 2, 3, 17, 32002] {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert!(f.inv(&0).is_none());
    }

    #[test]
    fn prime_field_reduces_negative_rationals() {
        let f = PrimeField::new(7).unwrap();
        let q = BigRational::new(BigInt::from(-3), BigInt::from(2));
        // -3/2 = -3 * 4 = -12 = 2 mod 7
        assert_eq!(f.from_rational(&q).unwrap(), 2);
        let bad = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert!(f.from_rational(&bad).is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(32003).is_ok());
    }

    #[test]
    fn rationals_lowest_terms() {
        let q = Rationals;
        let a = q.div(&q.from_i64(4), &q.from_i64(-6));
        assert_eq!(a.numer(), &BigInt::from(-2));
        assert_eq!(a.denom(), &BigInt::from(3));
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(FieldDescriptor::parse("q").unwrap(), FieldDescriptor::Rational);
        assert_eq!(
            FieldDescriptor::parse("fp:32003").unwrap(),
            FieldDescriptor::Prime { p: 32003 }
        );
        assert!(FieldDescriptor::parse("fp:12").is_err());
        assert!(FieldDescriptor::parse("reals").is_err());
    }
}
