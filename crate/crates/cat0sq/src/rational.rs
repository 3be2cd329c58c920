//! Exact rational arithmetic helpers.
//!
//! All combinatorial geometry in this crate runs on `num::BigRational`.
//! Floating point only appears at the very edge (angles, reported lengths),
//! so equality tests deep inside the algorithms are exact.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Builds `p/q` from machine integers. Panics if `q == 0`.
pub fn q(p: i64, qd: i64) -> Q {
    BigRational::new(BigInt::from(p), BigInt::from(qd))
}

/// Builds the integer rational `n`.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Lossy conversion for reporting. The values this crate produces stay far
/// away from f64 overflow, so `unwrap` is safe in practice; still, fall back
/// to a ratio of parts if `num` declines.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses a rational literal: an optional sign, digits, optionally `/digits`.
/// Used by the text format and the CLI point grammar.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let numer: BigInt = num_str.parse().ok()?;
    let denom: BigInt = den_str.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

/// Renders a rational in the same syntax `parse_q` accepts: `p` or `p/q`,
/// always in lowest terms (BigRational keeps itself reduced).
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Smallest integer `n >= 0` with `n*n >= x`, for nonnegative `x`.
/// Exact: uses the integer square root of the ceiling of `x`.
pub fn ceil_sqrt(x: &Q) -> BigInt {
    assert!(!x.is_negative(), "ceil_sqrt of negative rational");
    let c = x.ceil().to_integer();
    let r = c.sqrt();
    if &r * &r >= c {
        r
    } else {
        r + 1
    }
}

/// `true` when `x` is a perfect square of a rational; if so returns the root.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let rn = x.numer().sqrt();
    let rd = x.denom().sqrt();
    if &rn * &rn == *x.numer() && &rd * &rd == *x.denom() {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in ["0", "7", "-3", "1/2", "-22/7", "13/169"] {
            let v = parse_q(s).unwrap();
            assert_eq!(parse_q(&format_q(&v)).unwrap(), v);
        }
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("").is_none());
        assert!(parse_q("x").is_none());
        assert!(parse_q("1.5").is_none());
    }

    #[test]
    fn reduced_on_format() {
        assert_eq!(format_q(&parse_q("4/8").unwrap()), "1/2");
        assert_eq!(format_q(&parse_q("-6/3").unwrap()), "-2");
    }

    #[test]
    fn ceil_sqrt_exact_and_between() {
        assert_eq!(ceil_sqrt(&qi(0)), BigInt::from(0));
        assert_eq!(ceil_sqrt(&qi(1)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&qi(2)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&qi(4)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&q(17, 4)), BigInt::from(3));
        assert_eq!(ceil_sqrt(&qi(288)), BigInt::from(17));
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&q(9, 4)).unwrap(), q(3, 2));
        assert_eq!(exact_sqrt(&qi(2)), None);
        assert_eq!(exact_sqrt(&qi(0)).unwrap(), qi(0));
    }
}
