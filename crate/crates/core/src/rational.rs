//! Exact rational helpers shared by every module.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exponents, pairings and Gram entries. Denominators in scope never exceed
/// a few hundred, so machine-word rationals are enough.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Parses `p`, `-p` or `p/q` with `q > 0`. Floating-point literals are rejected.
pub fn parse_rational(s: &str) -> Result<Q> {
    let err = || Error::MalformedRational(s.to_string());
    let parse_int = |t: &str| -> Result<i64> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<i64>().map_err(|_| err())
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s.trim())?)),
        Some((n, d)) => {
            let n = parse_int(n.trim())?;
            let d = d.trim();
            if d.starts_with('-') {
                return Err(err());
            }
            let d = parse_int(d)?;
            if d == 0 {
                return Err(err());
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Canonical rendering: `num/den` in lowest terms, integers without `/1`.
pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// True when `x` lies on the lattice `step * Z`.
pub fn on_lattice(x: &Q, step: &Q) -> bool {
    !step.is_zero() && (x / step).is_integer()
}

/// Smallest integer `n >= 0` with `n >= x`.
pub fn ceil_nonneg(x: &Q) -> i64 {
    if x.is_negative() {
        0
    } else {
        x.ceil().to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_accepted_forms() {
        assert_eq!(parse_rational("5").unwrap(), qi(5));
        assert_eq!(parse_rational("-3").unwrap(), qi(-3));
        assert_eq!(parse_rational("6/4").unwrap(), q(3, 2));
        assert_eq!(parse_rational("-1/2").unwrap(), q(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1.5", "1/0", "1/-2", "a", "1/", "/2", "--1", "1e3"] {
            assert!(parse_rational(bad).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-1, 2)), "-1/2");
        assert_eq!(format_rational(&qi(0)), "0");
    }
}
