//! Exact rational scalars and their text form.
//!
//! Rationals travel through JSON as strings, `"p"` for integers and `"p/q"`
//! otherwise, always in lowest terms with a positive denominator. Parsing
//! accepts non-lowest-terms input and normalizes silently.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always normalized (lowest terms, positive
/// denominator) by construction.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("PARSE_ERROR: empty rational literal")]
    Empty,
    #[error("PARSE_ERROR: invalid rational literal {0:?}")]
    Invalid(String),
    #[error("PARSE_ERROR: zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Shorthand for a rational from an integer pair. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` with optional sign on `p`. Whitespace around the
/// literal or the slash is tolerated; the result is normalized.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let mut parts = s.splitn(2, '/');
    let num_part = parts.next().unwrap().trim();
    let num: BigInt = num_part
        .parse()
        .map_err(|_| RationalParseError::Invalid(s.to_owned()))?;
    match parts.next() {
        None => Ok(Rational::from_integer(num)),
        Some(den_part) => {
            let den: BigInt = den_part
                .trim()
                .parse()
                .map_err(|_| RationalParseError::Invalid(s.to_owned()))?;
            if den.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_owned()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Formats as `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least integer `>= r`, as a `Rational`.
pub fn ceil(r: &Rational) -> Rational {
    Rational::from_integer(r.ceil().to_integer())
}

/// Greatest integer `<= r`, as a `BigInt`.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// `|r|`.
pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
