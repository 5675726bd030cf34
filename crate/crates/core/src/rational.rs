//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction. The zero vector maps to zeros.
pub fn clear_denominators(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = scaled
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|v| v / &gcd).collect()
}

pub fn to_i64_vec(values: &[BigInt]) -> Result<Vec<i64>> {
    values
        .iter()
        .map(|v| v.to_i64().ok_or(Error::Overflow))
        .collect()
}

/// Primitive integer vector of `values` shifted to sum to zero.
pub fn centered_integer_weights(values: &[Rational]) -> Result<Vec<i64>> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let n = Rational::from_integer(BigInt::from(values.len()));
    let mean = values.iter().fold(Rational::zero(), |acc, v| acc + v) / n;
    let centered: Vec<Rational> = values.iter().map(|v| v - &mean).collect();
    to_i64_vec(&clear_denominators(&centered))
}

pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    values.into_iter().fold(None, |acc: Option<Rational>, v| match acc {
        Some(a) if a <= *v => Some(a),
        _ => Some(v.clone()),
    })
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}
