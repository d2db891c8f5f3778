//! Finitely supported linear combinations over an ordered basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Q};

/// Basis labels that carry an integer degree.
pub trait Graded {
    fn degree(&self) -> i64;
}

/// A finite linear combination. Zero coefficients are never stored, so
/// structural equality is equality of vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<B: Ord> {
    terms: BTreeMap<B, Q>,
}

impl<B: Ord + Clone> Default for Vector<B> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<B: Ord + Clone> Vector<B> {
    pub fn zero() -> Self {
        Vector {
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Q::one())
    }

    pub fn term(b: B, c: Q) -> Self {
        let mut v = Self::zero();
        v.add_term(b, c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (B, Q)>>(terms: I) -> Self {
        let mut v = Self::zero();
        for (b, c) in terms {
            v.add_term(b, c);
        }
        v
    }

    pub fn add_term(&mut self, b: B, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Vector<B>, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Vector {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> Q {
        self.terms.get(b).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Q)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (B, Q)> {
        self.terms.into_iter()
    }

    /// Relabels every basis element; colliding labels are summed.
    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> Vector<C> {
        Vector::from_terms(self.terms.iter().map(|(b, x)| (f(b), x.clone())))
    }

    /// Keeps only the terms whose label satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Self {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, x)| (b.clone(), x.clone()))
                .collect(),
        }
    }

    /// Linear extension of a map given on basis elements.
    pub fn map_linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> Vector<C>) -> Vector<C> {
        let mut out = Vector::zero();
        for (b, x) in &self.terms {
            out.add_scaled(&f(b), x);
        }
        out
    }

    pub fn try_map_linear<C: Ord + Clone>(
        &self,
        mut f: impl FnMut(&B) -> Result<Vector<C>>,
    ) -> Result<Vector<C>> {
        let mut out = Vector::zero();
        for (b, x) in &self.terms {
            out.add_scaled(&f(b)?, x);
        }
        Ok(out)
    }
}

impl<B: Ord + Clone + Graded> Vector<B> {
    /// Degree-`d` component.
    pub fn component(&self, d: i64) -> Self {
        self.filter(|b| b.degree() == d)
    }

    /// `Some(d)` if every term has degree `d`; `None` for mixed degrees.
    /// The zero vector is homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Graded::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|b| b.degree() == d)
    }
}

/// Linear extension of `rule`; an index on which `rule` is undefined is an
/// input error.
pub fn apply_linear<B, C>(rule: impl Fn(&B) -> Option<Vector<C>>, v: &Vector<B>) -> Result<Vector<C>>
where
    B: Ord + Clone + fmt::Debug,
    C: Ord + Clone,
{
    v.try_map_linear(|b| rule(b).ok_or_else(|| Error::input(format!("rule undefined on {b:?}"))))
}

impl<B: Ord + Clone> Add for Vector<B> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<B: Ord + Clone> Add for &Vector<B> {
    type Output = Vector<B>;
    fn add(self, rhs: Self) -> Vector<B> {
        self.clone() + rhs.clone()
    }
}

impl<B: Ord + Clone> AddAssign for Vector<B> {
    fn add_assign(&mut self, rhs: Self) {
        for (b, x) in rhs.terms {
            self.add_term(b, x);
        }
    }
}

impl<B: Ord + Clone> AddAssign<&Vector<B>> for Vector<B> {
    fn add_assign(&mut self, rhs: &Vector<B>) {
        self.add_scaled(rhs, &Q::one());
    }
}

impl<B: Ord + Clone> Neg for Vector<B> {
    type Output = Self;
    fn neg(self) -> Self {
        Vector {
            terms: self.terms.into_iter().map(|(b, x)| (b, -x)).collect(),
        }
    }
}

impl<B: Ord + Clone> Sub for Vector<B> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<B: Ord + Clone> Sub for &Vector<B> {
    type Output = Vector<B>;
    fn sub(self, rhs: Self) -> Vector<B> {
        self.clone() - rhs.clone()
    }
}

impl<B: Ord + Clone> FromIterator<(B, Q)> for Vector<B> {
    fn from_iter<I: IntoIterator<Item = (B, Q)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<B: Ord + fmt::Debug> fmt::Debug for Vector<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (b, x)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})·{:?}", scalar::format(x), b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn zero_terms_are_dropped() {
        let mut v = Vector::basis(1u32);
        v.add_term(1, q(-1));
        assert!(v.is_zero());
        assert_eq!(v, Vector::zero());
    }

    #[test]
    fn apply_linear_basics() {
        let v: Vector<u32> = Vector::from_terms([(1, q(3)), (2, q(5))]);
        let id = |b: &u32| Some(Vector::basis(*b));
        assert_eq!(apply_linear(id, &v).unwrap(), v);
        assert!(apply_linear(id, &Vector::<u32>::zero()).unwrap().is_zero());
        let dbl = |b: &u32| Some(Vector::term(*b, q(2)));
        assert_eq!(apply_linear(dbl, &Vector::basis(1)).unwrap().coeff(&1), q(2));
        let partial = |b: &u32| (*b == 1).then(|| Vector::basis(*b));
        assert!(apply_linear(partial, &v).is_err());
    }
}
