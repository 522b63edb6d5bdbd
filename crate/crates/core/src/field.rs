//! Coefficient fields: the rationals and prime fields `F_p`.
//!
//! Everything downstream is generic over [`Field`]. A field value is a small
//! handle (`Rationals` is a unit struct, `PrimeField` carries its modulus), and
//! elements are plain data manipulated through the handle.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default screening prime.
pub const DEFAULT_PRIME: u64 = 32003;

/// Which coefficient field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Rejects characteristic 2 and 3, where the symmetric-group idempotents
    /// are undefined.
    pub fn require_char_not_2_3(&self) -> Result<()> {
        match self.characteristic() {
            2 | 3 => Err(Error::BadCharacteristic(self.characteristic())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}` (expected Q or Fp:<p>)")))?
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("bad prime in `{s}`: {e}")))?;
        if !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::Parse(format!("prime {p} too large (must be < 2^31)")));
        }
        Ok(FieldSpec::Prime(p))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact coefficient field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Fails when the denominator vanishes in this field.
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// `(numerator, denominator)` as decimal strings, denominator positive.
    fn to_parts(&self, a: &Self::Elem) -> (String, String);

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Parses a `num`/`den` pair of decimal strings.
    fn parse_parts(&self, num: &str, den: &str) -> Result<Self::Elem> {
        let n = BigInt::from_str(num.trim()).map_err(|e| Error::Parse(format!("bad numerator `{num}`: {e}")))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| Error::Parse(format!("bad denominator `{den}`: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        self.from_rational(&BigRational::new(n, d))
    }

    fn format(&self, a: &Self::Elem) -> String {
        let (n, d) = self.to_parts(a);
        if d == "1" {
            n
        } else {
            format!("{n}/{d}")
        }
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn to_parts(&self, a: &BigRational) -> (String, String) {
        (a.numer().to_string(), a.denom().to_string())
    }
}

/// The prime field `F_p`, `p < 2^31`. Elements are canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::Parse(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_bigint(q.denom());
        if den == 0 {
            return Err(Error::DenominatorVanishes { value: q.to_string(), p: self.p });
        }
        let num = self.reduce_bigint(q.numer());
        Ok(num * self.pow(den, self.p - 2) % self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn to_parts(&self, a: &u64) -> (String, String) {
        (a.to_string(), "1".to_string())
    }
}

/// Convenience: a rational from a small numerator/denominator.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Sign of a rational as -1, 0, 1.
pub fn rat_sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parse_and_display() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fp:32003".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(32003));
        assert_eq!(FieldSpec::Prime(5).to_string(), "Fp:5");
        assert!("Fp:32004".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.from_rational(&rat(1, 3)).unwrap(), 2);
        assert!(f.from_rational(&rat(1, 10)).is_err());
        assert_eq!(f.mul(&4, &4), 1);
    }

    #[test]
    fn rationals_round_trip_parts() {
        let q = Rationals;
        let x = q.parse_parts("-6", "4").unwrap();
        assert_eq!(q.to_parts(&x), ("-3".into(), "2".into()));
        assert_eq!(q.format(&x), "-3/2");
    }

    #[test]
    fn char_2_3_rejected() {
        assert!(FieldSpec::Prime(3).require_char_not_2_3().is_err());
        assert!(FieldSpec::Prime(2).require_char_not_2_3().is_err());
        assert!(FieldSpec::Prime(7).require_char_not_2_3().is_ok());
        assert!(FieldSpec::Rationals.require_char_not_2_3().is_ok());
    }
}
