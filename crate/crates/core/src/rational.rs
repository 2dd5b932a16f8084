//! Exact rational scalars.
//!
//! Every coefficient in this crate is a `num_rational::BigRational`:
//! arbitrary-precision, always reduced, denominator positive. No floating
//! point appears anywhere in the library.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `int` or `int/nat` with arbitrary-precision digits.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let (ns, ds) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = ns.parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("invalid integer `{ns}`"),
    })?;
    let den: BigInt = ds.parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("invalid denominator `{ds}`"),
    })?;
    if den.is_zero() {
        return Err(Error::Parse {
            pos: 0,
            msg: "zero denominator".into(),
        });
    }
    if den.is_negative() {
        return Err(Error::Parse {
            pos: 0,
            msg: "denominator must be a positive natural".into(),
        });
    }
    Ok(Rat::new(num, den))
}

/// Canonical display: `p` for integers, `p/q` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces_and_normalizes() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-27/256").unwrap(), rat(-27, 256));
        assert_eq!(parse_rat("42").unwrap(), rat_int(42));
    }

    #[test]
    fn parse_rejects_bad_denominators() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-3").is_err());
        assert!(parse_rat("a/3").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "-5", "3/7", "-19/21"] {
            assert_eq!(fmt_rat(&parse_rat(s).unwrap()), s);
        }
    }
}
