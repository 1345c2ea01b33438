//! Exact rational scalars and their `"p/q"` string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FormatError;

/// The scalar field used everywhere in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Encode as `"p/q"` in lowest terms with `q > 0`; integers keep the `/1`.
pub fn to_string(x: &Q) -> String {
    // BigRational is always normalized with a positive denominator.
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `"p/q"` or a bare integer `"p"`.
pub fn parse(s: &str) -> Result<Q, FormatError> {
    let s = s.trim();
    let bad = || FormatError::Rational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_lowest_terms() {
        assert_eq!(to_string(&qf(6, -4)), "-3/2");
        assert_eq!(to_string(&q(5)), "5/1");
        assert_eq!(to_string(&zero()), "0/1");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse("-3/2").unwrap(), qf(-3, 2));
        assert_eq!(parse("4/8").unwrap(), qf(1, 2));
        assert_eq!(parse("7").unwrap(), q(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), q(1));
        assert_eq!(factorial(4), q(24));
    }
}
