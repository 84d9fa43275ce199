//! Exact rationals and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, RationalParseError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RationalParseError::Malformed(whole.to_owned()));
    }
    s.parse::<BigInt>()
        .map_err(|_| RationalParseError::Malformed(whole.to_owned()))
}

/// Parses `"p/q"` or `"n"`. Only ASCII digits and an optional leading minus
/// on the numerator are accepted; the denominator must be positive.
pub fn parse_rational(s: &str) -> Result<Q, RationalParseError> {
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s, s)?)),
        Some((num, den)) => {
            let n = parse_int(num, s)?;
            if den.starts_with('-') {
                return Err(RationalParseError::Malformed(s.to_owned()));
            }
            let d = parse_int(den, s)?;
            if d.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_owned()));
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Canonical text form: `"n"` for integers, `"p/q"` in lowest terms otherwise.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7));
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&q(5)), "5");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "+3", "1/-2", "a", "1/", "/2", "1.5", " 1", "--1", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }
}
