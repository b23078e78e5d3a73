//! Exact rational scalars.
//!
//! All coordinates in this crate are arbitrary-precision rationals, kept
//! normalized (gcd 1, positive denominator) by the underlying representation.
//! There is no floating point anywhere: saturation decisions must be exact.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as a rational; panics on `q == 0`.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational written as a decimal integer or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Format as a bare integer when the denominator is 1, else `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_negative(r: &Rat) -> bool {
    r.numer().is_negative()
}

pub fn is_positive(r: &Rat) -> bool {
    r.numer().is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "7/2", "-9/4"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat("-6/4").unwrap()), "-3/2");
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn normalization_invariants() {
        let r = rat_frac(6, -4);
        assert!(r.denom().is_positive());
        assert_eq!(format_rat(&r), "-3/2");
        assert!(rat(0).is_zero());
    }
}
