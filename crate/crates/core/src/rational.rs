//! Exact rationals and their text forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let err = || Error::Parse(s.to_string());
    let s = s.trim();
    if let Some((p, d)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(p, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| err())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| err())?;
        let v = Q::new(int * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    s.parse::<BigInt>().map(Q::from_integer).map_err(|_| err())
}

/// Lowest-terms `p/q`, or `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Decimal rendering truncated toward zero after `digits` places.
pub fn fmt_decimal(x: &Q, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (x.numer().abs() * &scale) / x.denom();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if x.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn pow_q(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn is_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x <= Q::one()
}

/// Serde adapter rendering a rational as its `p/q` string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}
