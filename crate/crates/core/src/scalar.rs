//! Exact rational scalars.
//!
//! Every quantity in the crate is a [`Scalar`], an arbitrary-precision rational
//! kept in lowest terms with a positive denominator. Equality is structural, so
//! the branch tests of the probing algorithms are decided exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

/// Arbitrary-precision rational in canonical reduced form.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid exact number {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: &'static str,
}

pub fn int(value: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(value))
}

/// `numer / denom`, reduced. Panics if `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Parses an integer (`-12`), a fraction (`3/4`), or a finite decimal (`-0.125`).
///
/// Decimals are read as exact base-10 rationals; no binary floating point is
/// involved at any stage.
pub fn parse_scalar(input: &str) -> Result<Scalar, ParseScalarError> {
    let err = |reason| ParseScalarError {
        input: input.to_owned(),
        reason,
    };
    let text = input.trim();
    if text.is_empty() {
        return Err(err("empty"));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_int(num.trim()).ok_or_else(|| err("bad numerator"))?;
        let den = parse_int(den.trim()).ok_or_else(|| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Scalar::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal fraction"));
        }
        let (negative, digits) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal integer part"));
        }
        let mantissa = format!("{digits}{frac}");
        let mantissa = BigInt::from_str(&mantissa).map_err(|_| err("bad decimal"))?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Scalar::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    parse_int(text)
        .map(Scalar::from_integer)
        .ok_or_else(|| err("not an integer, fraction, or decimal"))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text.strip_prefix('+').unwrap_or(text)).ok()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_scalar(value: &Scalar) -> String {
    value.to_string()
}

/// Nearest `f64`, for rendering only.
pub fn to_f64(value: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
