//! Parameter values and the scalar fields the closed-form formulas are
//! evaluated over.
//!
//! Every formula in [`crate::moments`] is written once, generically over
//! [`Field`], and instantiated with `f64` for the numeric path and
//! [`BigRational`] for the exact path.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A real-valued operator parameter.
///
/// Parameters that are rational are kept exact so the oracle can use them;
/// anything else is carried as a float and only usable numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Exact(BigRational),
    Float(f64),
}

impl Param {
    pub fn int(v: i64) -> Self {
        Param::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Param::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(q) => rational_to_f64(q),
            Param::Float(v) => *v,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Param::Exact(q) => Some(q),
            Param::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Param::Exact(_))
    }
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::int(v)
    }
}

impl From<BigRational> for Param {
    fn from(q: BigRational) -> Self {
        Param::Exact(q)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(q) => write!(f, "{q}"),
            Param::Float(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    /// Accepts integers, fractions `p/q` and decimals (`2.5`, `1e-3`), all
    /// kept exact.
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s.trim())
            .map(Param::Exact)
            .ok_or_else(|| Error::ParameterDomain(format!("cannot parse parameter `{s}`")))
    }
}

/// Parses an integer, a fraction `p/q`, or a decimal literal exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_rational(num.trim())?;
        let d = parse_rational(den.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() {
            return v;
        }
    }
    // numerator or denominator too large for a direct conversion
    let bits = q.numer().bits().max(q.denom().bits());
    let shift = bits.saturating_sub(960);
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Arithmetic needed by the closed-form moment formulas.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_i64(v: i64) -> Self;
    fn from_param(p: &Param) -> Result<Self>;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
}

impl Field for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_param(p: &Param) -> Result<Self> {
        Ok(p.to_f64())
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_param(p: &Param) -> Result<Self> {
        p.as_rational()
            .cloned()
            .ok_or_else(|| Error::UnsupportedExactParameter(p.to_string()))
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_literals() {
        assert_eq!(parse_rational("5/2"), Some(rational(5, 2)));
        assert_eq!(parse_rational("0.25"), Some(rational(1, 4)));
        assert_eq!(parse_rational("-1"), Some(rational(-1, 1)));
        assert_eq!(parse_rational("1e-3"), Some(rational(1, 1000)));
        assert_eq!(parse_rational("2.5E1"), Some(rational(25, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn float_params_refuse_exact_use() {
        let p = Param::Float(std::f64::consts::SQRT_2);
        assert!(matches!(
            BigRational::from_param(&p),
            Err(Error::UnsupportedExactParameter(_))
        ));
        assert_eq!(f64::from_param(&p).unwrap(), std::f64::consts::SQRT_2);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(
            num_traits::pow(BigInt::from(10), 400),
            num_traits::pow(BigInt::from(10), 399) * BigInt::from(4),
        );
        assert!((rational_to_f64(&big) - 2.5).abs() < 1e-12);
    }
}
