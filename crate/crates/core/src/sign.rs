//! Koszul signs for permuting graded symbols.

use crate::error::{Error, Result};
use crate::scalar::{self, Q};

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Sign picked up when the word `x_1 … x_n` (degrees `degrees`) is rearranged
/// into `x_{σ(1)} … x_{σ(n)}`; `perm` lists `σ(1), …, σ(n)` using 1-based
/// positions. Each transposition of symbols of degrees p, q costs (−1)^{pq}.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<Q> {
    if perm.len() != degrees.len() {
        return Err(Error::input(format!(
            "permutation has length {} but {} degrees were given",
            perm.len(),
            degrees.len()
        )));
    }
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::input(format!("{perm:?} is not a permutation of 1..{n}")));
        }
        seen[p - 1] = true;
    }
    let zero_based: Vec<usize> = perm.iter().map(|p| p - 1).collect();
    Ok(scalar::sign(koszul_odd(&zero_based, degrees)))
}

/// Parity of the Koszul sign, with 0-based `perm`.
pub fn koszul_odd(perm: &[usize], degrees: &[i64]) -> bool {
    let mut neg = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && odd(degrees[perm[i]]) && odd(degrees[perm[j]]) {
                neg = !neg;
            }
        }
    }
    neg
}

/// Parity of the permutation itself, with 0-based `perm`.
pub fn perm_odd(perm: &[usize]) -> bool {
    let mut neg = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                neg = !neg;
            }
        }
    }
    neg
}

/// Koszul sign times the signature: the sign rule for graded antisymmetric
/// maps.
pub fn antisymmetric_odd(perm: &[usize], degrees: &[i64]) -> bool {
    koszul_odd(perm, degrees) ^ perm_odd(perm)
}

/// Stable sort of `items` by key; returns the 0-based permutation `σ` with
/// `sorted[i] = items[σ(i)]`.
pub fn sorting_perm<T: Ord>(items: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.sort_by(|&a, &b| items[a].cmp(&items[b]));
    idx
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// `(p, n−p)`-unshuffles of `0..n`: the first `p` entries increase and so do
/// the remaining ones.
pub fn unshuffles(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == p {
            let mut perm = pick.clone();
            perm.extend((0..n).filter(|i| !pick.contains(i)));
            out.push(perm);
            return;
        }
        for i in start..n {
            pick.push(i);
            rec(i + 1, n, p, pick, out);
            pick.pop();
        }
    }
    rec(0, n, p, &mut pick, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn small_cases() {
        assert_eq!(koszul_sign(&[1, 2, 3], &[1, 1, 1]).unwrap(), q(1));
        assert_eq!(koszul_sign(&[2, 1], &[1, 1]).unwrap(), q(-1));
        assert_eq!(koszul_sign(&[2, 1], &[1, 2]).unwrap(), q(1));
        assert!(koszul_sign(&[2, 1], &[1]).is_err());
        assert!(koszul_sign(&[1, 1], &[1, 1]).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(unshuffles(4, 2).len(), 6);
        assert_eq!(unshuffles(3, 0), vec![vec![0, 1, 2]]);
    }
}
