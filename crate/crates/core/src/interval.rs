//! Polynomial forms on the interval, the dual coalgebra of forms, and the
//! Čech chains of the interval.
//!
//! Grading is homological: functions sit in degree 0 and `dt` in degree −1,
//! so the dual basis has `α_i = (tⁱ)∨` in degree 0 and `β_i = (tⁱdt)∨` in
//! degree 1, and every differential lowers degree by one.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::retract::{omega_embed, theta};
use crate::scalar::{binomial, q, Q};
use crate::tensor::{tensor_all, TensorSum, Word};
use crate::vector::{Graded, Vector};

/// `f(t) + g(t)·dt` with coefficient lists in increasing powers of `t`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OmegaForm {
    f: Vec<Q>,
    g: Vec<Q>,
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let get = |v: &[Q], i: usize| v.get(i).cloned().unwrap_or_else(Q::zero);
    trim((0..n).map(|i| get(a, i) + get(b, i)).collect())
}

impl OmegaForm {
    pub fn new(f: Vec<Q>, g: Vec<Q>) -> Self {
        OmegaForm {
            f: trim(f),
            g: trim(g),
        }
    }

    pub fn function(f: Vec<Q>) -> Self {
        Self::new(f, Vec::new())
    }

    /// `tʲ`
    pub fn t_pow(j: usize) -> Self {
        let mut f = vec![Q::zero(); j + 1];
        f[j] = Q::one();
        Self::function(f)
    }

    /// `tʲ·dt`
    pub fn t_pow_dt(j: usize) -> Self {
        let mut g = vec![Q::zero(); j + 1];
        g[j] = Q::one();
        Self::new(Vec::new(), g)
    }

    pub fn f(&self) -> &[Q] {
        &self.f
    }

    pub fn g(&self) -> &[Q] {
        &self.g
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_empty() && self.g.is_empty()
    }

    /// `f + g·dt ↦ f′·dt`
    pub fn derham_d(&self) -> Self {
        let df = self
            .f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * q(i as i64))
            .collect();
        Self::new(Vec::new(), df)
    }

    /// Evaluation at an endpoint; the `dt` part is discarded.
    pub fn evaluate_at(&self, s: u8) -> Result<Q> {
        match s {
            0 => Ok(self.f.first().cloned().unwrap_or_else(Q::zero)),
            1 => Ok(self.f.iter().fold(Q::zero(), |acc, c| acc + c)),
            _ => Err(Error::input(format!("can only evaluate at 0 or 1, not {s}"))),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            poly_mul(&self.f, &other.f),
            poly_add(&poly_mul(&self.f, &other.g), &poly_mul(&self.g, &other.f)),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(poly_add(&self.f, &other.f), poly_add(&self.g, &other.g))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(
            self.f.iter().map(|x| x * c).collect(),
            self.g.iter().map(|x| x * c).collect(),
        )
    }

    /// Coordinates in the monomial basis.
    pub fn to_vector(&self) -> Vector<FormBasis> {
        let a = self.f.iter().enumerate().map(|(j, c)| (FormBasis::T(j as u32), c.clone()));
        let b = self.g.iter().enumerate().map(|(j, c)| (FormBasis::TDt(j as u32), c.clone()));
        a.chain(b).collect()
    }

    pub fn from_vector(v: &Vector<FormBasis>) -> Self {
        let mut out = OmegaForm::default();
        for (b, c) in v.iter() {
            let m = match b {
                FormBasis::T(j) => OmegaForm::t_pow(*j as usize),
                FormBasis::TDt(j) => OmegaForm::t_pow_dt(*j as usize),
            };
            out = out.add(&m.scale(c));
        }
        out
    }
}

impl fmt::Debug for OmegaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vector())
    }
}

/// Monomial basis `tʲ` (degree 0) and `tʲdt` (degree −1) of the forms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormBasis {
    T(u32),
    TDt(u32),
}

impl FormBasis {
    pub fn t_degree(&self) -> u32 {
        match self {
            FormBasis::T(j) | FormBasis::TDt(j) => *j,
        }
    }

    /// Product of monomials; `dt·dt = 0`.
    pub fn mul(&self, other: &FormBasis) -> Option<FormBasis> {
        use FormBasis::*;
        match (self, other) {
            (T(a), T(b)) => Some(T(a + b)),
            (T(a), TDt(b)) | (TDt(a), T(b)) => Some(TDt(a + b)),
            (TDt(_), TDt(_)) => None,
        }
    }

    pub fn derham_d(&self) -> Vector<FormBasis> {
        match self {
            FormBasis::T(0) | FormBasis::TDt(_) => Vector::zero(),
            FormBasis::T(j) => Vector::term(FormBasis::TDt(j - 1), q(*j as i64)),
        }
    }
}

impl Graded for FormBasis {
    fn degree(&self) -> i64 {
        match self {
            FormBasis::T(_) => 0,
            FormBasis::TDt(_) => -1,
        }
    }
}

impl fmt::Debug for FormBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormBasis::T(j) => write!(f, "t^{j}"),
            FormBasis::TDt(j) => write!(f, "t^{j}dt"),
        }
    }
}

/// Dual basis of the forms: `α_i = (tⁱ)∨` and `β_i = (tⁱdt)∨`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dual {
    Alpha(u32),
    Beta(u32),
}

impl Dual {
    pub fn index(&self) -> u32 {
        match self {
            Dual::Alpha(i) | Dual::Beta(i) => *i,
        }
    }
}

impl Graded for Dual {
    fn degree(&self) -> i64 {
        match self {
            Dual::Alpha(_) => 0,
            Dual::Beta(_) => 1,
        }
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dual::Alpha(i) => write!(f, "α{i}"),
            Dual::Beta(i) => write!(f, "β{i}"),
        }
    }
}

pub type DualVector = Vector<Dual>;

/// Basis elements `α_i, β_i` with `i ≤ max`.
pub fn dual_basis_upto(max: u32) -> Vec<Dual> {
    (0..=max).flat_map(|i| [Dual::Alpha(i), Dual::Beta(i)]).collect()
}

pub fn dual_coproduct_basis(x: &Dual) -> TensorSum<Dual> {
    let w = |a: Dual, b: Dual| Word::new(vec![a, b]).unwrap();
    let mut out = Vector::zero();
    match *x {
        Dual::Alpha(i) => {
            for a in 0..=i {
                out.add_term(w(Dual::Alpha(a), Dual::Alpha(i - a)), Q::one());
            }
        }
        Dual::Beta(i) => {
            for a in 0..=i {
                out.add_term(w(Dual::Beta(a), Dual::Alpha(i - a)), Q::one());
                out.add_term(w(Dual::Alpha(a), Dual::Beta(i - a)), Q::one());
            }
        }
    }
    out
}

pub fn dual_coproduct(v: &DualVector) -> TensorSum<Dual> {
    v.map_linear(dual_coproduct_basis)
}

pub fn dual_d_basis(x: &Dual) -> DualVector {
    match *x {
        Dual::Alpha(_) => Vector::zero(),
        Dual::Beta(i) => Vector::term(Dual::Alpha(i + 1), q(i as i64 + 1)),
    }
}

pub fn dual_d(v: &DualVector) -> DualVector {
    v.map_linear(dual_d_basis)
}

/// A filtration level; the zero vector lies in every piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Finite(u32),
    Infinite,
}

pub fn basis_level(x: &Dual) -> u32 {
    match *x {
        Dual::Alpha(j) => j,
        Dual::Beta(j) => j + 1,
    }
}

/// Largest `N` with `v` in the span of `α_j (j ≥ N)` and `β_j (j ≥ N−1)`.
pub fn filtration_level(v: &DualVector) -> Level {
    v.support()
        .map(basis_level)
        .min()
        .map_or(Level::Infinite, Level::Finite)
}

/// Čech cells of the interval.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Zero,
    One,
    ZeroOne,
}

pub const CELLS: [Cell; 3] = [Cell::Zero, Cell::One, Cell::ZeroOne];

impl Cell {
    pub fn name(&self) -> &'static str {
        match self {
            Cell::Zero => "0",
            Cell::One => "1",
            Cell::ZeroOne => "01",
        }
    }

    pub fn parse(s: &str) -> Result<Cell> {
        match s {
            "0" => Ok(Cell::Zero),
            "1" => Ok(Cell::One),
            "01" => Ok(Cell::ZeroOne),
            _ => Err(Error::input(format!("unknown cell {s:?}; expected 0, 1 or 01"))),
        }
    }
}

impl Graded for Cell {
    fn degree(&self) -> i64 {
        match self {
            Cell::ZeroOne => 1,
            _ => 0,
        }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type CechChain = Vector<Cell>;

pub fn cech_d_basis(c: &Cell) -> CechChain {
    match c {
        Cell::ZeroOne => Vector::from_terms([(Cell::One, q(1)), (Cell::Zero, q(-1))]),
        _ => Vector::zero(),
    }
}

pub fn cech_d(v: &CechChain) -> CechChain {
    v.map_linear(cech_d_basis)
}

/// `δ^{n−1}` iterated on the left factor; coassociativity makes the choice
/// irrelevant.
pub fn iterated_coproduct(v: &DualVector, n: usize) -> TensorSum<Dual> {
    let mut acc: TensorSum<Dual> = v.map_basis(|b| Word::single(*b));
    for _ in 1..n {
        let mut next = Vector::zero();
        for (w, c) in acc.iter() {
            let f = w.factors();
            for (pair, x) in dual_coproduct_basis(&f[0]).iter() {
                let mut nf = pair.factors().to_vec();
                nf.extend_from_slice(&f[1..]);
                next.add_term(Word::new(nf).unwrap(), c * x);
            }
        }
        acc = next;
    }
    acc
}

/// `(θ^{⊗n} ∘ δ^{n−1} ∘ ω_N)(cell)`, refused outside the stable range `N > n`.
pub fn decorate(cell: Cell, n: usize, level: u32) -> Result<TensorSum<Cell>> {
    if n == 0 {
        return Err(Error::input("arity must be at least 1"));
    }
    if (level as usize) <= n {
        return Err(Error::input(format!(
            "level {level} is not above arity {n}; results are only stable for N > n"
        )));
    }
    let start = omega_embed(&Vector::basis(cell), level)?;
    let mut out = Vector::zero();
    for (w, c) in iterated_coproduct(&start, n).iter() {
        let slots: Vec<CechChain> = w.factors().iter().map(|x| theta(&Vector::basis(*x))).collect();
        for (cells, x) in tensor_all(&slots).iter() {
            out.add_term(Word::new(cells.clone()).unwrap(), c * x);
        }
    }
    Ok(out)
}

/// The symmetrized one-insertion element
/// `(1/n) Σ_pos Σ_j sym(𝟏^j 𝟎^{n−1−j})` with `𝟎𝟏` at `pos`, where `sym` is
/// the average over the `C(n−1, j)` orderings.
pub fn one_insertion_pattern(n: usize) -> Result<TensorSum<Cell>> {
    if n == 0 {
        return Err(Error::input("arity must be at least 1"));
    }
    let mut out = Vector::zero();
    for pos in 0..n {
        for mask in 0u32..(1 << (n - 1)) {
            let ones = mask.count_ones() as usize;
            let mut cells: Vec<Cell> = (0..n - 1)
                .map(|i| if mask >> i & 1 == 1 { Cell::One } else { Cell::Zero })
                .collect();
            cells.insert(pos, Cell::ZeroOne);
            let c = Q::new(1.into(), binomial(n - 1, ones) * BigInt::from(n));
            out.add_term(Word::new(cells).unwrap(), c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    #[test]
    fn de_rham_examples() {
        let t2 = OmegaForm::t_pow(2);
        assert_eq!(t2.derham_d(), OmegaForm::new(vec![], vec![q(0), q(2)]));
        assert!(OmegaForm::t_pow_dt(0).derham_d().is_zero());
        let w = OmegaForm::new(vec![q(1)], vec![q(0), q(1)]);
        assert_eq!(w.derham_d(), OmegaForm::default());
        let w = OmegaForm::new(vec![q(1), q(1)], vec![q(0), q(1)]);
        assert_eq!(w.derham_d(), OmegaForm::t_pow_dt(0));
    }

    #[test]
    fn evaluation() {
        let t = OmegaForm::t_pow(1);
        assert_eq!(t.evaluate_at(1).unwrap(), q(1));
        assert_eq!(t.evaluate_at(0).unwrap(), q(0));
        let w = OmegaForm::new(vec![q(3)], vec![q(0), q(1)]);
        assert_eq!(w.evaluate_at(1).unwrap(), q(3));
        assert!(t.evaluate_at(2).is_err());
    }

    #[test]
    fn dual_examples() {
        let a0 = Word::new(vec![Dual::Alpha(0), Dual::Alpha(0)]).unwrap();
        assert_eq!(dual_coproduct_basis(&Dual::Alpha(0)), Vector::basis(a0));
        assert_eq!(dual_coproduct_basis(&Dual::Alpha(2)).len(), 3);
        assert_eq!(dual_coproduct_basis(&Dual::Beta(0)).len(), 2);
        assert_eq!(dual_d_basis(&Dual::Beta(0)), Vector::basis(Dual::Alpha(1)));
        assert_eq!(dual_d_basis(&Dual::Beta(3)), Vector::term(Dual::Alpha(4), q(4)));
        assert!(dual_d_basis(&Dual::Alpha(5)).is_zero());
    }

    #[test]
    fn levels() {
        assert_eq!(filtration_level(&Vector::basis(Dual::Alpha(3))), Level::Finite(3));
        assert_eq!(filtration_level(&Vector::basis(Dual::Beta(3))), Level::Finite(4));
        let v = Vector::basis(Dual::Alpha(0)) + Vector::basis(Dual::Beta(5));
        assert_eq!(filtration_level(&v), Level::Finite(0));
        assert_eq!(filtration_level(&Vector::zero()), Level::Infinite);
    }

    #[test]
    fn cech_examples() {
        assert_eq!(
            cech_d(&Vector::term(Cell::ZeroOne, q(2))),
            Vector::from_terms([(Cell::One, q(2)), (Cell::Zero, q(-2))])
        );
        assert!(cech_d(&Vector::basis(Cell::Zero)).is_zero());
    }

    #[test]
    fn decorate_two() {
        let w = |a: Cell, b: Cell| Word::new(vec![a, b]).unwrap();
        let h = frac(1, 2);
        let expected = Vector::from_terms([
            (w(Cell::ZeroOne, Cell::Zero), h.clone()),
            (w(Cell::ZeroOne, Cell::One), h.clone()),
            (w(Cell::Zero, Cell::ZeroOne), h.clone()),
            (w(Cell::One, Cell::ZeroOne), h),
        ]);
        assert_eq!(decorate(Cell::ZeroOne, 2, 4).unwrap(), expected);
        assert!(decorate(Cell::ZeroOne, 3, 3).is_err());
    }

    #[test]
    fn decorate_matches_pattern() {
        for n in 1..=5 {
            assert_eq!(decorate(Cell::ZeroOne, n, n as u32 + 1).unwrap(), one_insertion_pattern(n).unwrap());
        }
        let w = Word::new(vec![Cell::Zero, Cell::One, Cell::ZeroOne]).unwrap();
        assert_eq!(one_insertion_pattern(3).unwrap().coeff(&w), frac(1, 6));
    }
}
