//! Exact rational helpers on top of [`num_rational::BigRational`].
//!
//! Rationals travel through JSON as `"p/q"` strings. The denominator is
//! always printed, so `1` becomes `"1/1"`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Canonical exact rational (gcd-reduced, positive denominator).
pub type Rational = num_rational::BigRational;

pub fn from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Formats as `"p/q"` with the denominator always present.
pub fn to_fraction_string(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"p/q"` or a bare integer string. Rejects zero denominators.
pub fn parse_fraction(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| format!("invalid numerator in {text:?}"))?;
    let denom = BigInt::from_str(denom).map_err(|_| format!("invalid denominator in {text:?}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(numer, denom))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside f64 range of the parts.
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact factorial.
pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// A list of rationals rewritten over one common positive denominator.
///
/// Integer numerators make the hot loops in the Shapley and convexity
/// code plain big-integer additions instead of gcd-normalizing rational
/// arithmetic.
#[derive(Debug, Clone)]
pub struct ScaledTable {
    pub denom: BigInt,
    pub numers: Vec<BigInt>,
}

impl ScaledTable {
    pub fn new(values: &[Rational]) -> Self {
        let denom = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let numers = values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        Self { denom, numers }
    }

    pub fn value(&self, index: usize) -> Rational {
        Rational::new(self.numers[index].clone(), self.denom.clone())
    }

    /// Small-integer view when every numerator fits in an `i64`.
    pub fn as_i64(&self) -> Option<Vec<i64>> {
        self.numers.iter().map(|n| n.to_i64()).collect()
    }
}

pub fn is_non_negative(value: &Rational) -> bool {
    !value.is_negative()
}
