//! Scalar type and parsing helpers for exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The exact scalar used throughout the decision pipeline.
pub type Q = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer rational `n`.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Converts to `f64`, which is exact-to-nearest.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for huge operands.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parses a rational written either as a fraction (`-3/2`) or as a decimal
/// (`0.25`). Whitespace around the number is ignored.
pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError(s.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| ParseRationalError(s.to_string()))?;
        let d: BigInt = den.trim().parse().map_err(|_| ParseRationalError(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseRationalError(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| ParseRationalError(s.to_string()))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError(s.to_string()));
        }
        let frac_digits: BigInt = frac_part.parse().map_err(|_| ParseRationalError(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int_digits.abs() * &scale + frac_digits;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| ParseRationalError(s.to_string()))?;
    Ok(BigRational::from_integer(n))
}

/// Formats a rational as `n` or `n/d`, the wire format used by the CLI.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("2/3").unwrap(), q(2, 3));
        assert_eq!(parse_rational("-3/2").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), qi(7));
        assert_eq!(parse_rational("4/6").unwrap(), q(2, 3));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("2.").is_err(), true);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn round_trips_wire_format() {
        for s in ["-3/2", "2/3", "7", "0"] {
            let v = parse_rational(s).unwrap();
            assert_eq!(format_rational(&v), s);
        }
    }
}
