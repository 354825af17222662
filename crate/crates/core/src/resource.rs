//! Resource amounts.
//!
//! Every quantity in an allocation graph (capacities, pair allocations, path
//! allocations) is a non-negative dimensionless amount. Two representations are
//! supported: exact arbitrary-precision rationals, used by default and by every
//! oracle, and `f64` for large simulations.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational amount.
pub type Rational = BigRational;

/// Scalar type used for resource amounts.
pub trait Resource:
    Clone
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// `true` when arithmetic never rounds.
    const EXACT: bool;
    /// Name written into serialized documents (`exact` or `float`).
    const MODE: &'static str;

    fn from_u64(v: u64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn parse_amount(s: &str) -> Result<Self>;
    fn to_json(&self) -> Value;

    /// Plain-text form used in reports: `p/q` for exact amounts, shortest
    /// round-trip decimal for floats.
    fn to_text(&self) -> String {
        match self.to_json() {
            Value::String(s) => s,
            other => other.to_string(),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse_amount(s),
            Value::Number(n) => Self::parse_amount(&n.to_string()),
            other => Err(Error::InvalidAmount(format!("expected string or number, got {other}"))),
        }
    }

    /// Negative or not-a-number.
    fn is_invalid(&self) -> bool {
        self.partial_cmp(&Self::zero()).is_none_or(Ordering::is_lt)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

/// Smaller of two amounts; the first one wins ties.
pub fn min_of<R: Resource>(a: R, b: R) -> R {
    if b < a {
        b
    } else {
        a
    }
}

/// Larger of two amounts; the first one wins ties.
pub fn max_of<R: Resource>(a: R, b: R) -> R {
    if b > a {
        b
    } else {
        a
    }
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidAmount(format!("cannot parse `{s}` as a rational"));
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Ok(r)
}

impl Resource for Rational {
    const EXACT: bool = true;
    const MODE: &'static str = "exact";

    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_amount(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn to_json(&self) -> Value {
        Value::String(rational_string(self))
    }

    fn is_invalid(&self) -> bool {
        self.is_negative()
    }
}

impl Resource for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_amount(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return parse_rational(s).map(|r| Resource::to_f64(&r));
        }
        s.parse::<f64>()
            .map_err(|_| Error::InvalidAmount(format!("cannot parse `{s}` as a decimal")))
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.to_string()))
    }
}
