//! Tensor words and sums of them.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::vector::{Graded, Vector};

/// A nonempty ordered list of basis labels, read as `x_1 ⊗ … ⊗ x_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word<B>(Vec<B>);

pub type TensorSum<B> = Vector<Word<B>>;

impl<B: Clone> Word<B> {
    pub fn new(factors: Vec<B>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::input("tensor words must have at least one factor"));
        }
        Ok(Word(factors))
    }

    pub fn single(b: B) -> Self {
        Word(vec![b])
    }

    pub fn factors(&self) -> &[B] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Word<B>) -> Word<B> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn into_factors(self) -> Vec<B> {
        self.0
    }
}

impl<B: Graded> Graded for Word<B> {
    fn degree(&self) -> i64 {
        self.0.iter().map(Graded::degree).sum()
    }
}

impl<B: fmt::Debug> fmt::Debug for Word<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, b) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{b:?}")?;
        }
        Ok(())
    }
}

/// Degree-one words of a vector.
pub fn words_of<B: Ord + Clone>(v: &Vector<B>) -> TensorSum<B> {
    v.map_basis(|b| Word::single(b.clone()))
}

/// `a ⊗ b` for sums of words (no signs; factors are only juxtaposed).
pub fn tensor<B: Ord + Clone>(a: &TensorSum<B>, b: &TensorSum<B>) -> TensorSum<B> {
    let mut out = Vector::zero();
    for (u, x) in a.iter() {
        for (w, y) in b.iter() {
            out.add_term(u.concat(w), x * y);
        }
    }
    out
}

/// Tensor product of a list of single-slot vectors.
pub fn tensor_all<B: Ord + Clone>(slots: &[Vector<B>]) -> Vector<Vec<B>> {
    let mut acc: Vector<Vec<B>> = Vector::basis(Vec::new());
    for s in slots {
        let mut next = Vector::zero();
        for (prefix, x) in acc.iter() {
            for (b, y) in s.iter() {
                let mut p = prefix.clone();
                p.push(b.clone());
                next.add_term(p, x * y);
            }
        }
        acc = next;
    }
    acc
}

/// Sign of applying a list of maps with degrees `map_deg` factorwise to a
/// word with factor degrees `word_deg`: map `j` passes factors `0..j`.
pub fn factorwise_sign(map_deg: &[i64], word_deg: &[i64]) -> bool {
    let mut passed = 0i64;
    let mut odd = false;
    for (m, w) in map_deg.iter().zip(word_deg) {
        odd ^= (m * passed).rem_euclid(2) == 1;
        passed += w;
    }
    odd
}

/// A linear map given on basis elements.
pub type BasisMap<'a, B, C> = dyn FnMut(&B) -> Vector<C> + 'a;

/// Applies one linear map per slot, with Koszul signs for the map degrees.
pub fn apply_factorwise<B, C>(
    word: &Word<B>,
    maps: &mut [&mut BasisMap<'_, B, C>],
    map_deg: &[i64],
) -> Vector<Word<C>>
where
    B: Ord + Clone + Graded,
    C: Ord + Clone,
{
    let wd: Vec<i64> = word.factors().iter().map(Graded::degree).collect();
    let neg = factorwise_sign(map_deg, &wd);
    let slots: Vec<Vector<C>> = word
        .factors()
        .iter()
        .zip(maps.iter_mut())
        .map(|(b, f)| f(b))
        .collect();
    let c = crate::scalar::sign(neg);
    tensor_all(&slots).map_basis(|v| Word(v.clone())).scale(&c)
}

/// Rescales each word by `f(word)`.
pub fn reweight<B: Ord + Clone>(v: &TensorSum<B>, f: impl Fn(&Word<B>) -> Q) -> TensorSum<B> {
    Vector::from_terms(v.iter().map(|(w, x)| (w.clone(), x * f(w))))
}
