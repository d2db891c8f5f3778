//! Bernoulli numbers and a binomial identity used in the decoration count.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::{binomial, Q};

/// `B_0, …, B_m` with `B_1 = −1/2`, i.e. the coefficients of `x/(eˣ−1)`.
pub fn bernoulli_table(m: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if k == 0 {
            b.push(Q::one());
            continue;
        }
        // Σ_{j=0}^{k} C(k+1, j) B_j = 0, solved for B_k.
        let mut s = Q::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Q::from_integer(binomial(k + 1, j)) * bj;
        }
        b.push(-s / Q::from_integer(BigInt::from(k + 1)));
    }
    b
}

pub fn bernoulli(k: usize) -> Q {
    bernoulli_table(k).pop().unwrap()
}

type Poly2 = BTreeMap<(usize, usize), BigInt>;

fn add_into(p: &mut Poly2, key: (usize, usize), c: BigInt) {
    let e = p.entry(key).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&key);
    }
}

fn mul(p: &Poly2, r: &Poly2) -> Poly2 {
    let mut out = Poly2::new();
    for (&(a, b), x) in p {
        for (&(c, d), y) in r {
            add_into(&mut out, (a + c, b + d), x * y);
        }
    }
    out
}

/// Checks `Σ_{i<n} C(n,i+1) a^{n−1−i} b^i = Σ_{j<n} a^{n−1−j} (a+b)^j` in
/// `ℤ[a,b]`.
pub fn binomial_identity_check(n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let mut lhs = Poly2::new();
    for i in 0..n {
        add_into(&mut lhs, (n - 1 - i, i), binomial(n, i + 1));
    }
    let a_plus_b: Poly2 = [((1, 0), BigInt::one()), ((0, 1), BigInt::one())].into();
    let mut rhs = Poly2::new();
    let mut pow: Poly2 = [((0, 0), BigInt::one())].into();
    for j in 0..n {
        for (&(x, y), c) in &pow {
            add_into(&mut rhs, (x + n - 1 - j, y), c.clone());
        }
        pow = mul(&pow, &a_plus_b);
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, q};

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_table(8);
        assert_eq!(b[0], q(1));
        assert_eq!(b[1], frac(-1, 2));
        assert_eq!(b[2], frac(1, 6));
        assert_eq!(b[3], q(0));
        assert_eq!(b[4], frac(-1, 30));
        assert_eq!(b[6], frac(1, 42));
        assert_eq!(b[8], frac(-1, 30));
    }

    #[test]
    fn binomial_identity_small() {
        assert!(binomial_identity_check(1));
        assert!(binomial_identity_check(3));
        assert!(!binomial_identity_check(0));
    }
}
