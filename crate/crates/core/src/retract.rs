//! Homotopy retracts and the convergent family `(θ, ω_N, K_N)` from the
//! dual forms onto the Čech chains.

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::interval::{
    dual_basis_upto, dual_d, filtration_level, Cell, CechChain, Dual, DualVector, Level,
    CELLS,
};
use crate::scalar::{frac, q, Q};
use crate::vector::Vector;

type Map<A, B> = Arc<dyn Fn(&A) -> Vector<B> + Send + Sync>;

pub fn theta_basis(x: &Dual) -> CechChain {
    match *x {
        Dual::Alpha(0) => Vector::basis(Cell::Zero),
        Dual::Alpha(1) => Vector::from_terms([(Cell::One, q(1)), (Cell::Zero, q(-1))]),
        Dual::Beta(0) => Vector::basis(Cell::ZeroOne),
        _ => Vector::zero(),
    }
}

pub fn theta(v: &DualVector) -> CechChain {
    v.map_linear(theta_basis)
}

fn check_level(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::input(format!("retract level must be ≥ 2, got {n}")));
    }
    Ok(())
}

pub fn omega_embed_basis(c: &Cell, n: u32) -> DualVector {
    match c {
        Cell::Zero => Vector::basis(Dual::Alpha(0)),
        Cell::One => (0..n).map(|p| (Dual::Alpha(p), Q::one())).collect(),
        Cell::ZeroOne => (0..n - 1)
            .map(|p| (Dual::Beta(p), frac(1, p as i64 + 1)))
            .collect(),
    }
}

pub fn omega_embed(c: &CechChain, n: u32) -> Result<DualVector> {
    check_level(n)?;
    Ok(c.map_linear(|x| omega_embed_basis(x, n)))
}

pub fn k_homotopy_basis(x: &Dual, n: u32) -> DualVector {
    match *x {
        Dual::Alpha(0) | Dual::Beta(_) => Vector::zero(),
        Dual::Alpha(1) => (1..n.saturating_sub(1))
            .map(|j| (Dual::Beta(j), frac(-1, j as i64 + 1)))
            .collect(),
        Dual::Alpha(i) => Vector::term(Dual::Beta(i - 1), frac(1, i as i64)),
    }
}

pub fn k_homotopy(v: &DualVector, n: u32) -> Result<DualVector> {
    check_level(n)?;
    Ok(v.map_linear(|x| k_homotopy_basis(x, n)))
}

/// `(dK_N + K_N d)(x) − (id − ω_N θ)(x)`.
pub fn retract_defect(n: u32, x: &Dual) -> Result<DualVector> {
    let v = Vector::basis(*x);
    let lhs = dual_d(&k_homotopy(&v, n)?) + k_homotopy(&dual_d(&v), n)?;
    let rhs = v.clone() - omega_embed(&theta(&v), n)?;
    Ok(lhs - rhs)
}

/// What a convergence probe is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Cell(Cell),
    Dual(Dual),
}

/// Whether `ω_N − ω_{N+s}` (on cells) or `K_N − K_{N+s}` (on dual basis
/// elements) lands in filtration level `N`.
pub fn convergence_check(n: u32, s: u32, x: Probe) -> Result<bool> {
    check_level(n)?;
    if s == 0 {
        return Err(Error::input("increment must be ≥ 1"));
    }
    let diff = match x {
        Probe::Cell(c) => {
            let v = Vector::basis(c);
            omega_embed(&v, n)? - omega_embed(&v, n + s)?
        }
        Probe::Dual(d) => {
            let v = Vector::basis(d);
            k_homotopy(&v, n)? - k_homotopy(&v, n + s)?
        }
    };
    Ok(filtration_level(&diff) >= Level::Finite(n))
}

/// A homotopy retract `(i, p, H)` of `big` onto `small`, with maps given per
/// basis element. `big_sample` lists the basis elements on which identities
/// are verified; it is all of the basis when the big side is finite.
#[derive(Clone)]
pub struct Retract<B: Ord, S: Ord> {
    pub d_big: Map<B, B>,
    pub d_small: Map<S, S>,
    pub proj: Map<B, S>,
    pub incl: Map<S, B>,
    pub homotopy: Map<B, B>,
    pub big_sample: Vec<B>,
    pub small_basis: Vec<S>,
}

/// A failed retract identity on one basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractFailure {
    pub identity: &'static str,
    pub element: String,
    pub defect: String,
}

impl fmt::Display for RetractFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on {}: {}", self.identity, self.element, self.defect)
    }
}

impl<B, S> Retract<B, S>
where
    B: Ord + Clone + fmt::Debug,
    S: Ord + Clone + fmt::Debug,
{
    pub fn p(&self, v: &Vector<B>) -> Vector<S> {
        v.map_linear(|x| (self.proj)(x))
    }

    pub fn i(&self, v: &Vector<S>) -> Vector<B> {
        v.map_linear(|x| (self.incl)(x))
    }

    pub fn h(&self, v: &Vector<B>) -> Vector<B> {
        v.map_linear(|x| (self.homotopy)(x))
    }

    pub fn db(&self, v: &Vector<B>) -> Vector<B> {
        v.map_linear(|x| (self.d_big)(x))
    }

    pub fn ds(&self, v: &Vector<S>) -> Vector<S> {
        v.map_linear(|x| (self.d_small)(x))
    }

    /// `p∘i = id`, `d∘p = p∘d`, `d∘i = i∘d` and `id − i∘p = dH + Hd`.
    pub fn verify(&self) -> Vec<RetractFailure> {
        let mut out = Vec::new();
        let mut fail = |identity, el: String, defect: String| {
            out.push(RetractFailure {
                identity,
                element: el,
                defect,
            })
        };
        for s in &self.small_basis {
            let v = Vector::basis(s.clone());
            let pi = self.p(&self.i(&v)) - v.clone();
            if !pi.is_zero() {
                fail("p∘i = id", format!("{s:?}"), format!("{pi:?}"));
            }
            let di = self.db(&self.i(&v)) - self.i(&self.ds(&v));
            if !di.is_zero() {
                fail("d∘i = i∘d", format!("{s:?}"), format!("{di:?}"));
            }
        }
        for b in &self.big_sample {
            let v = Vector::basis(b.clone());
            let dp = self.ds(&self.p(&v)) - self.p(&self.db(&v));
            if !dp.is_zero() {
                fail("d∘p = p∘d", format!("{b:?}"), format!("{dp:?}"));
            }
            let lhs = self.db(&self.h(&v)) + self.h(&self.db(&v));
            let rhs = v.clone() - self.i(&self.p(&v));
            let hd = lhs - rhs;
            if !hd.is_zero() {
                fail("id − i∘p = dH + Hd", format!("{b:?}"), format!("{hd:?}"));
            }
        }
        out
    }

    /// `H∘H = 0`, `p∘H = 0`, `H∘i = 0`.
    pub fn verify_side_conditions(&self) -> Vec<RetractFailure> {
        let mut out = Vec::new();
        for b in &self.big_sample {
            let v = Vector::basis(b.clone());
            let hh = self.h(&self.h(&v));
            if !hh.is_zero() {
                out.push(RetractFailure {
                    identity: "H∘H = 0",
                    element: format!("{b:?}"),
                    defect: format!("{hh:?}"),
                });
            }
            let ph = self.p(&self.h(&v));
            if !ph.is_zero() {
                out.push(RetractFailure {
                    identity: "p∘H = 0",
                    element: format!("{b:?}"),
                    defect: format!("{ph:?}"),
                });
            }
        }
        for s in &self.small_basis {
            let hi = self.h(&self.i(&Vector::basis(s.clone())));
            if !hi.is_zero() {
                out.push(RetractFailure {
                    identity: "H∘i = 0",
                    element: format!("{s:?}"),
                    defect: format!("{hi:?}"),
                });
            }
        }
        out
    }
}

/// `(θ, ω_N, K_N)` packaged as a retract, verified on indices `≤ 2N`.
pub fn make_interval_retract(n: u32) -> Result<Retract<Dual, Cell>> {
    check_level(n)?;
    Ok(Retract {
        d_big: Arc::new(crate::interval::dual_d_basis),
        d_small: Arc::new(crate::interval::cech_d_basis),
        proj: Arc::new(theta_basis),
        incl: Arc::new(move |c| omega_embed_basis(c, n)),
        homotopy: Arc::new(move |x| k_homotopy_basis(x, n)),
        big_sample: dual_basis_upto(2 * n),
        small_basis: CELLS.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        assert_eq!(
            theta(&Vector::basis(Dual::Alpha(1))),
            Vector::from_terms([(Cell::One, q(1)), (Cell::Zero, q(-1))])
        );
        assert_eq!(theta(&Vector::basis(Dual::Beta(0))), Vector::basis(Cell::ZeroOne));
        let v = Vector::basis(Dual::Alpha(7)) + Vector::basis(Dual::Beta(4));
        assert!(theta(&v).is_zero());
    }

    #[test]
    fn omega_examples() {
        let one = omega_embed(&Vector::basis(Cell::One), 3).unwrap();
        assert_eq!(one, (0..3).map(|p| (Dual::Alpha(p), q(1))).collect());
        let h = omega_embed(&Vector::basis(Cell::ZeroOne), 4).unwrap();
        let expected: DualVector = [
            (Dual::Beta(0), q(1)),
            (Dual::Beta(1), frac(1, 2)),
            (Dual::Beta(2), frac(1, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(h, expected);
        assert!(omega_embed(&Vector::basis(Cell::Zero), 1).is_err());
    }

    #[test]
    fn k_examples() {
        let a3 = k_homotopy(&Vector::basis(Dual::Alpha(3)), 7).unwrap();
        assert_eq!(a3, Vector::term(Dual::Beta(2), frac(1, 3)));
        let a1 = k_homotopy(&Vector::basis(Dual::Alpha(1)), 5).unwrap();
        let expected: DualVector = [
            (Dual::Beta(1), frac(-1, 2)),
            (Dual::Beta(2), frac(-1, 3)),
            (Dual::Beta(3), frac(-1, 4)),
        ]
        .into_iter()
        .collect();
        assert_eq!(a1, expected);
        assert!(k_homotopy(&Vector::basis(Dual::Beta(9)), 4).unwrap().is_zero());
    }

    #[test]
    fn defect_examples() {
        assert!(retract_defect(5, &Dual::Alpha(1)).unwrap().is_zero());
        assert!(retract_defect(4, &Dual::Beta(0)).unwrap().is_zero());
        assert!(retract_defect(3, &Dual::Alpha(0)).unwrap().is_zero());
    }

    #[test]
    fn convergence_examples() {
        assert!(convergence_check(3, 2, Probe::Cell(Cell::One)).unwrap());
        assert!(convergence_check(6, 3, Probe::Cell(Cell::Zero)).unwrap());
        assert!(convergence_check(4, 1, Probe::Dual(Dual::Alpha(1))).unwrap());
    }

    #[test]
    fn packaged_retract_is_valid() {
        for n in [2, 6] {
            let r = make_interval_retract(n).unwrap();
            assert!(r.verify().is_empty());
            assert!(r.verify_side_conditions().is_empty());
        }
    }
}
