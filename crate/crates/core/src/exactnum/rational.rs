use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always stored reduced with a positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn checked_div(a: &ExactRational, b: &ExactRational) -> Result<ExactRational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Parses "p/q" or "p".
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Fractional part in [0, 1).
pub fn frac(x: &ExactRational) -> ExactRational {
    x - x.floor()
}

pub fn abs(x: &ExactRational) -> ExactRational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-12/5").unwrap(), rat(-12, 5));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&rat(4, -6)), "-2/3");
        assert_eq!(format_rational(&int(-3)), "-3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&int(1), &int(0)), Err(Error::DivisionByZero));
        assert_eq!(checked_div(&int(1), &int(2)).unwrap(), rat(1, 2));
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&rat(7, 2)), rat(1, 2));
        assert_eq!(frac(&int(-4)), int(0));
    }
}
