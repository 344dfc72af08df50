//! Exact rational helpers shared by every module.
//!
//! Energies, bounds and deviations are [`Rational`] (arbitrary precision).
//! Hot loops never touch these; they compare cross-multiplied integers
//! instead.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `count / total` for unsigned counts.
pub fn ratio(count: u64, total: u64) -> Rational {
    Rational::new(BigInt::from(count), BigInt::from(total))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Formats as `"num/den"`, always with a denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = |why: &str| Error::Rational(s.to_string(), why.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("numerator is not an integer"))?;
    let d: BigInt = d.parse().map_err(|_| bad("denominator is not an integer"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn ceil_to_u64(r: &Rational) -> u64 {
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: a [`Rational`] as a `"num/den"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A rational strictly between 0 and 1, kept as a reduced `num/den` pair
/// of machine integers so that regularity checks can cross-multiply.
///
/// Used both for the regularity parameter ε and the counting slack δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

pub type Delta = Epsilon;

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        let text = format!("{num}/{den}");
        if den == 0 {
            return Err(Error::Rational(text, "zero denominator".into()));
        }
        if num == 0 || num >= den {
            return Err(Error::Rational(text, "must lie strictly between 0 and 1".into()));
        }
        let g = num_integer::gcd(num, den);
        let (num, den) = (num / g, den / g);
        if den > Self::MAX_DENOMINATOR {
            return Err(Error::Rational(text, "denominator exceeds 2^32".into()));
        }
        Ok(Epsilon { num, den })
    }

    /// Largest supported denominator; keeps cross-multiplied checks inside `u128`.
    pub const MAX_DENOMINATOR: u64 = 1 << 32;

    pub fn from_rational(r: &Rational) -> Result<Self> {
        let text = format_rational(r);
        let range = || Error::Rational(text.clone(), "must lie strictly between 0 and 1".into());
        if !r.is_positive() || *r >= Rational::one() {
            return Err(range());
        }
        let num = r.numer().to_u64().ok_or_else(range)?;
        let den = r.denom().to_u64().ok_or_else(range)?;
        Epsilon::new(num, den)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn value(self) -> Rational {
        rat(self.num as i64, self.den as i64)
    }

    /// `1 - self`.
    pub fn complement(self) -> Rational {
        Rational::one() - self.value()
    }

    /// Smallest integer `m` with `m >= self * n`.
    pub fn ceil_mul(self, n: usize) -> usize {
        let p = self.num as u128 * n as u128;
        p.div_ceil(self.den as u128) as usize
    }

    /// Smallest integer `m` with `m >= (1 - self) * n`.
    pub fn ceil_complement_mul(self, n: usize) -> usize {
        let p = (self.den - self.num) as u128 * n as u128;
        p.div_ceil(self.den as u128) as usize
    }

    /// Whether `count <= self * total`, exactly.
    pub fn at_most_fraction(self, count: usize, total: usize) -> bool {
        count as u128 * self.den as u128 <= self.num as u128 * total as u128
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Epsilon::from_rational(&parse_rational(s)?)
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
