//! L∞-algebras given by brackets on basis elements.
//!
//! Brackets `ℓ_k` have degree `k − 2` and are graded antisymmetric:
//! swapping neighbours `x, y` costs `−(−1)^{|x||y|}`. The generalized Jacobi
//! identity is checked on the shifted side, where
//! `λ_k(sx_1, …, sx_k) = (−1)^{k(k−1)/2 + Σ_i (k−i)|x_i|} s ℓ_k(x_1, …, x_k)`
//! is graded symmetric of degree −1 and `Σ_{i+j=n+1} λ_j ∘ λ_i = 0`. Under
//! this dictionary the Maurer–Cartan series and twisting take their usual
//! form `Σ ℓ_k(α, …, α)/k!`.

pub mod conv;
pub mod curves;
pub mod samples;
pub mod table;

use std::collections::BTreeMap;


use crate::error::{Error, Result};
use crate::scalar::Q;
use crate::sign::{koszul_odd, unshuffles};
use crate::vector::Vector;

pub use table::TableLInf;

/// Elements are combinations of basis indices.
pub type Element = Vector<usize>;

pub trait LInf {
    fn dim(&self) -> usize;
    fn degree(&self, i: usize) -> i64;
    /// Filtration weight of a basis element (≥ 1).
    fn weight(&self, _i: usize) -> u32 {
        1
    }
    fn name(&self, i: usize) -> String;
    /// Brackets of arity above this are zero.
    fn arity_cap(&self) -> usize;
    /// `ℓ_k` on basis elements, in the given order.
    fn bracket(&self, k: usize, args: &[usize]) -> Element;
}

impl<L: LInf + ?Sized> LInf for &L {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn degree(&self, i: usize) -> i64 {
        (**self).degree(i)
    }
    fn weight(&self, i: usize) -> u32 {
        (**self).weight(i)
    }
    fn name(&self, i: usize) -> String {
        (**self).name(i)
    }
    fn arity_cap(&self) -> usize {
        (**self).arity_cap()
    }
    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        (**self).bracket(k, args)
    }
}

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Degree of a homogeneous element, `None` for zero.
pub fn element_degree<L: LInf + ?Sized>(l: &L, x: &Element) -> Result<Option<i64>> {
    let mut d = None;
    for (&i, _) in x.iter() {
        if i >= l.dim() {
            return Err(Error::input(format!("basis index {i} out of range")));
        }
        match d {
            None => d = Some(l.degree(i)),
            Some(e) if e != l.degree(i) => return Err(Error::input("element is not homogeneous")),
            _ => {}
        }
    }
    Ok(d)
}

pub fn require_degree<L: LInf + ?Sized>(l: &L, x: &Element, want: i64, what: &str) -> Result<()> {
    match element_degree(l, x)? {
        Some(d) if d != want => Err(Error::input(format!("{what} must have degree {want}, found {d}"))),
        _ => Ok(()),
    }
}

/// `ℓ_k` extended multilinearly.
pub fn bracket_elems<L: LInf + ?Sized>(l: &L, args: &[&Element]) -> Element {
    let k = args.len();
    let mut out = Vector::zero();
    if k == 0 || k > l.arity_cap() || args.iter().any(|a| a.is_zero()) {
        return out;
    }
    let mut idx = Vec::with_capacity(k);
    fn rec<L: LInf + ?Sized>(l: &L, args: &[&Element], idx: &mut Vec<usize>, c: Q, out: &mut Element) {
        if idx.len() == args.len() {
            out.add_scaled(&l.bracket(args.len(), idx), &c);
            return;
        }
        for (&i, x) in args[idx.len()].iter() {
            idx.push(i);
            rec(l, args, idx, &c * x, out);
            idx.pop();
        }
    }
    rec(l, args, &mut idx, Q::from_integer(1.into()), &mut out);
    out
}

/// Multisets of size `p` drawn from `support`, as index lists into it.
fn multisets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, p, cur, out);
            cur.pop();
        }
    }
    rec(0, n, p, &mut cur, &mut out);
    out
}

/// `Σ_{|m|=p} Π c_i^{m_i}/m_i! · ℓ_{p+n}(e^m, rest)`, which equals
/// `(1/p!) ℓ_{p+n}(α, …, α, rest)` when every term of `α` is odd.
fn odd_power_bracket<L: LInf + ?Sized>(l: &L, alpha: &[(usize, Q)], p: usize, rest: &[usize]) -> Element {
    let mut out = Vector::zero();
    let k = p + rest.len();
    if k == 0 || k > l.arity_cap() {
        return out;
    }
    for m in multisets(alpha.len(), p) {
        let mut c = Q::from_integer(1.into());
        let mut run = 1usize;
        for (j, &i) in m.iter().enumerate() {
            c *= &alpha[i].1;
            if j > 0 && m[j - 1] == i {
                run += 1;
                c /= Q::from_integer(run.into());
            } else {
                run = 1;
            }
        }
        let mut args: Vec<usize> = m.iter().map(|&i| alpha[i].0).collect();
        args.extend_from_slice(rest);
        out.add_scaled(&l.bracket(k, &args), &c);
    }
    out
}

fn odd_terms<L: LInf + ?Sized>(l: &L, alpha: &Element) -> Result<Vec<(usize, Q)>> {
    let mut v = Vec::new();
    for (&i, c) in alpha.iter() {
        if !odd(l.degree(i)) {
            return Err(Error::input("expected an element of odd degree"));
        }
        v.push((i, c.clone()));
    }
    Ok(v)
}

/// `Σ_{k=1}^{cap} ℓ_k(α, …, α)/k!`.
pub fn mc_defect<L: LInf + ?Sized>(l: &L, alpha: &Element, cap: usize) -> Result<Element> {
    require_degree(l, alpha, -1, "a Maurer–Cartan candidate")?;
    let a = odd_terms(l, alpha)?;
    let mut out = Vector::zero();
    for k in 1..=cap.min(l.arity_cap()) {
        out += odd_power_bracket(l, &a, k, &[]);
    }
    Ok(out)
}

/// `ℓ^α_n(x_1, …, x_n) = Σ_p ℓ_{n+p}(α^p, x_1, …, x_n)/p!` on basis
/// elements, for `α` of degree −1.
pub fn twisted_bracket<L: LInf + ?Sized>(l: &L, alpha: &[(usize, Q)], args: &[usize]) -> Element {
    let mut out = Vector::zero();
    for p in 0..=l.arity_cap().saturating_sub(args.len()) {
        out += odd_power_bracket(l, alpha, p, args);
    }
    out
}

/// `ℓ^α_1(x)` extended linearly.
pub fn twisted_l1<L: LInf + ?Sized>(l: &L, alpha: &Element, x: &Element) -> Result<Element> {
    require_degree(l, alpha, -1, "the twisting element")?;
    let a = odd_terms(l, alpha)?;
    Ok(x.map_linear(|&i| twisted_bracket(l, &a, &[i])))
}

/// The gauge vector field `V_x(α) = −ℓ^α_1(x)`.
pub fn gauge_field<L: LInf + ?Sized>(l: &L, x: &Element, alpha: &Element) -> Result<Element> {
    require_degree(l, x, 0, "the gauge parameter")?;
    Ok(-twisted_l1(l, alpha, x)?)
}

/// `λ_k` on basis elements (shifted side).
pub fn lambda<L: LInf + ?Sized>(l: &L, args: &[usize]) -> Element {
    let k = args.len();
    let mut e = k * (k - 1) / 2;
    for (i, &a) in args.iter().enumerate() {
        if odd(l.degree(a)) {
            e += k - 1 - i;
        }
    }
    let v = l.bracket(k, args);
    if e % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Arity-`n` generalized Jacobi defect on basis elements, expressed on the
/// shifted side; zero for an L∞-algebra.
pub fn jacobi_defect<L: LInf + ?Sized>(l: &L, inputs: &[usize]) -> Result<Element> {
    let n = inputs.len();
    if n == 0 {
        return Err(Error::input("need at least one input"));
    }
    if inputs.iter().any(|&i| i >= l.dim()) {
        return Err(Error::input("basis index out of range"));
    }
    let sdeg: Vec<i64> = inputs.iter().map(|&i| l.degree(i) + 1).collect();
    let mut out = Vector::zero();
    for i in 1..=n {
        let j = n + 1 - i;
        if i > l.arity_cap() || j > l.arity_cap() {
            continue;
        }
        for sigma in unshuffles(n, i) {
            let inner_args: Vec<usize> = sigma[..i].iter().map(|&s| inputs[s]).collect();
            let inner = lambda(l, &inner_args);
            if inner.is_zero() {
                continue;
            }
            let neg = koszul_odd(&sigma, &sdeg);
            for (&b, c) in inner.iter() {
                let mut args = vec![b];
                args.extend(sigma[i..].iter().map(|&s| inputs[s]));
                let v = lambda(l, &args);
                out.add_scaled(&v, &if neg { -c.clone() } else { c.clone() });
            }
        }
    }
    Ok(out)
}

/// Tuples (in canonical order) where the bracket table violates
/// `ℓ_k(F^{i_1}, …, F^{i_k}) ⊆ F^{i_1+…+i_k}`.
pub fn filtration_violations<L: LInf + ?Sized>(l: &L, tuples: &[Vec<usize>]) -> Vec<Vec<usize>> {
    tuples
        .iter()
        .filter(|t| {
            let w: u32 = t.iter().map(|&i| l.weight(i)).sum();
            l.bracket(t.len(), t).support().any(|&o| l.weight(o) < w)
        })
        .cloned()
        .collect()
}

/// `L` twisted by a degree −1 element.
pub struct Twisted<L> {
    base: L,
    alpha: Vec<(usize, Q)>,
    cache: std::sync::Mutex<BTreeMap<Vec<usize>, Element>>,
}

impl<L: LInf> Twisted<L> {
    /// Refuses `α` unless `mc_defect(α) = 0` up to the arity cap.
    pub fn new(base: L, alpha: &Element) -> Result<Self> {
        let d = mc_defect(&base, alpha, base.arity_cap())?;
        if !d.is_zero() {
            return Err(Error::input("twisting element is not Maurer–Cartan"));
        }
        Self::new_unchecked(base, alpha)
    }

    pub fn new_unchecked(base: L, alpha: &Element) -> Result<Self> {
        require_degree(&base, alpha, -1, "the twisting element")?;
        let alpha = odd_terms(&base, alpha)?;
        Ok(Twisted {
            base,
            alpha,
            cache: Default::default(),
        })
    }

    pub fn base(&self) -> &L {
        &self.base
    }
}

impl<L: LInf> LInf for Twisted<L> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn degree(&self, i: usize) -> i64 {
        self.base.degree(i)
    }
    fn weight(&self, i: usize) -> u32 {
        self.base.weight(i)
    }
    fn name(&self, i: usize) -> String {
        self.base.name(i)
    }
    fn arity_cap(&self) -> usize {
        self.base.arity_cap()
    }
    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        debug_assert_eq!(k, args.len());
        if let Some(v) = self.cache.lock().unwrap().get(args) {
            return v.clone();
        }
        let v = twisted_bracket(&self.base, &self.alpha, args);
        self.cache.lock().unwrap().insert(args.to_vec(), v.clone());
        v
    }
}

/// Renders an element as `name ↦ coefficient` pairs.
pub fn named<L: LInf + ?Sized>(l: &L, x: &Element) -> Vec<(String, Q)> {
    x.iter().map(|(&i, c)| (l.name(i), c.clone())).collect()
}

/// Parses `{name: "p/q"}` into an element.
pub fn element_from_names<L: LInf + ?Sized>(l: &L, terms: &BTreeMap<String, String>) -> Result<Element> {
    let index: BTreeMap<String, usize> = (0..l.dim()).map(|i| (l.name(i), i)).collect();
    let mut out = Vector::zero();
    for (n, c) in terms {
        let i = index
            .get(n)
            .ok_or_else(|| Error::input(format!("unknown basis element {n}")))?;
        out.add_term(*i, crate::scalar::parse(c)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
