//! Exact rational scalars and their string form.
//!
//! Literals are `"p/q"` or `"p"` with an optional leading minus. There is no
//! floating point anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign(neg: bool) -> Q {
    if neg {
        -Q::one()
    } else {
        Q::one()
    }
}

pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::input(format!("malformed rational literal {s:?}"));
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(int(s)?)),
        Some((n, d)) => {
            if d.starts_with('-') {
                return Err(bad());
            }
            let d = int(d)?;
            if d.is_zero() {
                return Err(Error::input(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(int(n)?, d))
        }
    }
}

/// Canonical string: `"p"` for integers, `"p/q"` otherwise.
pub fn format(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn inv_factorial(n: usize) -> Q {
    Q::new(BigInt::one(), factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-5/12", "12345678901234567890/7"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(format(&parse("4/8").unwrap()), "1/2");
        assert_eq!(format(&parse("-6/3").unwrap()), "-2");
    }

    #[test]
    fn rejects_junk() {
        for s in ["", "1.5", "1/0", "a", "1/-2", "--1", "1e3", "/3"] {
            assert!(parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
