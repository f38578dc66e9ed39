use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `num / den` from machine integers.
///
/// # Panics
/// Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form `num/den`, used by every on-disk format.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short form for human-readable reports: integers print without a denominator.
pub fn display_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

/// Parses `a/b` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// True when `r` is an integer `>= 0` and divisible by two.
pub fn is_nonneg_even(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative() && r.numer().is_even()
}

/// True when `r` is an even integer (any sign).
pub fn is_even_integer(r: &Rational) -> bool {
    r.is_integer() && r.numer().is_even()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_is_always_a_fraction() {
        assert_eq!(format_rational(&rat(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(0, 5)), "0/1");
        assert_eq!(format_rational(&rat_int(2)), "2/1");
        assert_eq!(display_rational(&rat_int(2)), "2");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["-9/11", "0/1", "11/10", "7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn parity_predicates() {
        assert!(is_nonneg_even(&rat_int(0)));
        assert!(is_nonneg_even(&rat_int(4)));
        assert!(!is_nonneg_even(&rat_int(-2)));
        assert!(!is_nonneg_even(&rat(1, 2)));
        assert!(is_even_integer(&rat_int(-2)));
    }
}
