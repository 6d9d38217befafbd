//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `a`, `a/b` or a finite decimal such as `0.001` into an exact rational.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Input(format!("cannot parse {text:?} as a rational number"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rational::new(digits, scale);
    Ok(if neg { -r } else { r })
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `r * scale` as an `i64`, which must be integral.
pub(crate) fn scaled_units(r: &Rational, scale: &BigInt) -> Result<i64> {
    let scaled = r * Rational::from_integer(scale.clone());
    if !scaled.is_integer() {
        return Err(Error::Invariant("scaled mass is not integral".into()));
    }
    scaled
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Capability("common denominator too large for exact transport".into()))
}
