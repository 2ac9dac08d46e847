//! Coefficient field: exact rationals with arbitrary-precision integers.
//!
//! `BigRational` already maintains the invariants we need: values are kept
//! in lowest terms, the denominator is positive, and zero is canonically
//! `0/1`, so structural equality is semantic equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// Integer scalar.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational scalar `n/d`, reduced. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Render in the bundle-file syntax: `<int>` or `<int>/<posint>`, lowest terms.
pub fn format_scalar(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse the bundle-file syntax. Non-canonical inputs like `2/4` are
/// accepted and reduced; the denominator must be a positive integer.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = || Error::InvalidParameter(format!("malformed rational `{text}`"));
    let (num_str, den_str) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer: BigInt = num_str.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_str {
        Some(d) => {
            if d.starts_with('+') || d.starts_with('-') {
                return Err(Error::InvalidParameter(format!(
                    "denominator in `{text}` must be a positive integer"
                )));
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() || denom.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "denominator in `{text}` must be a positive integer"
        )));
    }
    Ok(BigRational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_on_parse() {
        assert_eq!(parse_scalar("2/4").unwrap(), rat(1, 2));
        assert_eq!(format_scalar(&parse_scalar("2/4").unwrap()), "1/2");
        assert_eq!(parse_scalar("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_scalar(&int(-7)), "-7");
    }

    #[test]
    fn rejects_bad_denominators() {
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("1/-2").is_err());
        assert!(parse_scalar("a/2").is_err());
        assert!(parse_scalar("").is_err());
    }
}
