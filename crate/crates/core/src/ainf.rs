//! A∞-coalgebras, their coherence defect, and homotopy transfer along a
//! retract by planar-tree sums.
//!
//! Cooperations `δ_k : C → C^{⊗k}` have degree `k − 2` and are stored in the
//! displayed convention. Internally every computation passes to the
//! desuspension `V = s⁻¹C`, where each `δ_k` becomes a degree −1 map
//! `Δ_k(s⁻¹x) = (−1)^k (s⁻¹)^{⊗k} δ_k(x)` and coherence means that the
//! derivation `D = Σ Δ_k` of the tensor algebra on `V` squares to zero. The
//! factor `(−1)^k` does not affect coherence; it is chosen so that `Δ_1` is
//! the usual differential of a desuspension.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;


use crate::error::{Error, Result};
use crate::interval::{dual_coproduct_basis, dual_d_basis, Dual};
use crate::retract::Retract;
use crate::scalar::{self, Q};
use crate::tensor::{TensorSum, Word};
use crate::tree::{planar_trees, PlanarTree};
use crate::vector::{Graded, Vector};

/// Labels usable as coalgebra bases.
pub trait Label: Ord + Clone + Debug + Hash + Graded {}
impl<T: Ord + Clone + Debug + Hash + Graded> Label for T {}

pub trait AInfCoalgebra {
    type B: Label;

    /// Largest `k` for which `δ_k` may be requested.
    fn arity_cap(&self) -> usize;

    /// `δ_k(x)` in the displayed convention.
    fn delta(&self, k: usize, x: &Self::B) -> Result<TensorSum<Self::B>>;

    fn delta_vec(&self, k: usize, v: &Vector<Self::B>) -> Result<TensorSum<Self::B>> {
        v.try_map_linear(|x| self.delta(k, x))
    }
}

fn check_arity(k: usize, cap: usize) -> Result<()> {
    if k == 0 || k > cap {
        return Err(Error::input(format!("arity {k} outside 1..={cap}")));
    }
    Ok(())
}

/// Parity of the sign relating `δ_k` and `Δ_k` on one word.
pub fn shift_odd<B: Graded + Clone>(w: &Word<B>) -> bool {
    let k = w.len();
    let mut e = k as i64;
    for (i, b) in w.factors().iter().enumerate() {
        e += (k - 1 - i) as i64 * b.degree();
    }
    e.rem_euclid(2) == 1
}

/// Converts between the displayed and desuspended forms (an involution).
pub fn shift<B: Label>(v: &TensorSum<B>) -> TensorSum<B> {
    v.iter()
        .map(|(w, c)| (w.clone(), if shift_odd(w) { -c.clone() } else { c.clone() }))
        .collect()
}

fn sdeg<B: Graded>(b: &B) -> i64 {
    b.degree() - 1
}

/// `Δ_k(x)` on the desuspension.
pub fn shifted_delta<C: AInfCoalgebra + ?Sized>(c: &C, k: usize, x: &C::B) -> Result<TensorSum<C::B>> {
    Ok(shift(&c.delta(k, x)?))
}

/// Applies a degree −1 map to slot `r` of a desuspended word, with the
/// Koszul sign for passing the earlier factors.
fn insert_at<B: Label>(w: &Word<B>, r: usize, image: &TensorSum<B>, out: &mut TensorSum<B>, c: &Q) {
    let f = w.factors();
    let passed: i64 = f[..r].iter().map(sdeg).sum();
    let c = if passed.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
    for (u, x) in image.iter() {
        let mut nf = f[..r].to_vec();
        nf.extend_from_slice(u.factors());
        nf.extend_from_slice(&f[r + 1..]);
        out.add_term(Word::new(nf).unwrap(), &c * x);
    }
}

/// Arity-`n` component of `D∘D` on `x`, in the desuspended convention.
/// It is zero exactly when the cooperations are coherent at arity `n` on `x`.
pub fn coherence_defect<C: AInfCoalgebra + ?Sized>(c: &C, n: usize, x: &C::B) -> Result<TensorSum<C::B>> {
    check_arity(n, c.arity_cap())?;
    let mut out = Vector::zero();
    let mut memo: HashMap<(C::B, usize), TensorSum<C::B>> = HashMap::new();
    for m in 1..=n {
        let j = n + 1 - m;
        for (w, coef) in shifted_delta(c, m, x)?.iter() {
            for r in 0..m {
                let key = (w.factors()[r].clone(), j);
                if !memo.contains_key(&key) {
                    let v = shifted_delta(c, j, &key.0)?;
                    memo.insert(key.clone(), v);
                }
                insert_at(w, r, &memo[&key], &mut out, coef);
            }
        }
    }
    Ok(out)
}

/// `(arity, element, defect)`.
pub type CoherenceFailure<B> = (usize, B, TensorSum<B>);

/// Coherence failures up to `max_arity`.
pub fn coherence_failures<C: AInfCoalgebra + ?Sized>(
    c: &C,
    basis: &[C::B],
    max_arity: usize,
) -> Result<Vec<CoherenceFailure<C::B>>> {
    let mut out = Vec::new();
    for n in 1..=max_arity {
        for x in basis {
            let d = coherence_defect(c, n, x)?;
            if !d.is_zero() {
                out.push((n, x.clone(), d));
            }
        }
    }
    Ok(out)
}

/// An A∞-coalgebra given by finite tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCoalgebra<B: Label> {
    basis: Vec<B>,
    cap: usize,
    table: BTreeMap<(B, usize), TensorSum<B>>,
}

impl<B: Label> FiniteCoalgebra<B> {
    pub fn new(basis: Vec<B>, cap: usize) -> Self {
        FiniteCoalgebra {
            basis,
            cap,
            table: BTreeMap::new(),
        }
    }

    /// Sets `δ_k(x)`, checking word lengths and the degree `k − 2`.
    pub fn set(&mut self, k: usize, x: B, value: TensorSum<B>) -> Result<()> {
        check_arity(k, self.cap)?;
        if !self.basis.contains(&x) {
            return Err(Error::input(format!("{x:?} is not a basis element")));
        }
        for (w, _) in value.iter() {
            if w.len() != k {
                return Err(Error::input(format!("δ_{k}({x:?}) contains a word of length {}", w.len())));
            }
            if w.factors().iter().any(|b| !self.basis.contains(b)) {
                return Err(Error::input(format!("δ_{k}({x:?}) uses an unknown basis element")));
            }
            if w.degree() != x.degree() + k as i64 - 2 {
                return Err(Error::input(format!(
                    "δ_{k}({x:?}) has a term of degree {}, expected {}",
                    w.degree(),
                    x.degree() + k as i64 - 2
                )));
            }
        }
        if value.is_zero() {
            self.table.remove(&(x, k));
        } else {
            self.table.insert((x, k), value);
        }
        Ok(())
    }

    pub fn basis(&self) -> &[B] {
        &self.basis
    }

    /// Nonzero entries `((x, k), δ_k(x))`.
    pub fn entries(&self) -> impl Iterator<Item = (&(B, usize), &TensorSum<B>)> {
        self.table.iter()
    }

    /// Restriction to arities `≤ k`.
    pub fn truncate(&self, k: usize) -> Self {
        FiniteCoalgebra {
            basis: self.basis.clone(),
            cap: k.min(self.cap),
            table: self
                .table
                .iter()
                .filter(|((_, a), _)| *a <= k)
                .map(|(key, v)| (key.clone(), v.clone()))
                .collect(),
        }
    }

    /// Transports the structure along a basis relabelling with signs,
    /// `x ↦ ε_x·φ(x)`.
    pub fn relabel<T: Label>(&self, dict: &SignDictionary<B, T>) -> Result<FiniteCoalgebra<T>> {
        let image = |b: &B| dict.image(b);
        let mut out = FiniteCoalgebra::new(self.basis.iter().map(|b| dict.target(b)).collect::<Result<_>>()?, self.cap);
        for ((x, k), v) in &self.table {
            let (tx, ex) = image(x)?;
            let mut w_out = Vector::zero();
            for (w, c) in v.iter() {
                let mut sign = ex.clone();
                let mut f = Vec::with_capacity(w.len());
                for b in w.factors() {
                    let (t, e) = image(b)?;
                    sign *= e;
                    f.push(t);
                }
                w_out.add_term(Word::new(f)?, c * &sign);
            }
            out.set(*k, tx, w_out)?;
        }
        Ok(out)
    }
}

impl<B: Label> AInfCoalgebra for FiniteCoalgebra<B> {
    type B = B;

    fn arity_cap(&self) -> usize {
        self.cap
    }

    fn delta(&self, k: usize, x: &B) -> Result<TensorSum<B>> {
        check_arity(k, self.cap)?;
        if !self.basis.contains(x) {
            return Err(Error::input(format!("{x:?} is not a basis element")));
        }
        Ok(self.table.get(&(x.clone(), k)).cloned().unwrap_or_default())
    }
}

/// The dual forms with `δ_1 = d∨`, `δ_2` the dual coproduct and no higher
/// cooperations.
#[derive(Clone, Copy, Debug, Default)]
pub struct DualForms;

impl AInfCoalgebra for DualForms {
    type B = Dual;

    fn arity_cap(&self) -> usize {
        usize::MAX
    }

    fn delta(&self, k: usize, x: &Dual) -> Result<TensorSum<Dual>> {
        Ok(match k {
            1 => dual_d_basis(x).map_basis(|b| Word::single(*b)),
            2 => dual_coproduct_basis(x),
            0 => return Err(Error::input("arity must be ≥ 1")),
            _ => Vector::zero(),
        })
    }
}

/// A per-basis relabelling `x ↦ ε_x·φ(x)` with `ε_x = ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDictionary<S: Ord, T> {
    map: BTreeMap<S, (T, bool)>,
}

impl<S: Label, T: Label> SignDictionary<S, T> {
    /// Entries `(source, target, negate)`.
    pub fn new(entries: impl IntoIterator<Item = (S, T, bool)>) -> Self {
        SignDictionary {
            map: entries.into_iter().map(|(s, t, n)| (s, (t, n))).collect(),
        }
    }

    pub fn image(&self, s: &S) -> Result<(T, Q)> {
        let (t, neg) = self
            .map
            .get(s)
            .ok_or_else(|| Error::input(format!("dictionary has no entry for {s:?}")))?;
        Ok((t.clone(), scalar::sign(*neg)))
    }

    pub fn target(&self, s: &S) -> Result<T> {
        Ok(self.image(s)?.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&S, &T, bool)> {
        self.map.iter().map(|(s, (t, n))| (s, t, *n))
    }
}

/// Options for [`transfer_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransferOptions {
    /// Apply `p` leaf by leaf while recursing, skipping vanishing subtrees.
    pub prune: bool,
    /// Also evaluate every planar tree separately and require agreement.
    pub cross_check: bool,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions {
            prune: true,
            cross_check: false,
        }
    }
}

/// Memoized tree sums: `ρ_n(y) = p^{⊗n}(Σ_t t(Δ, H))(y)` on big basis
/// elements, all in the desuspended convention.
struct TreeSums<'a, C: AInfCoalgebra, S: Label> {
    c: &'a C,
    r: &'a Retract<C::B, S>,
    memo: HashMap<(C::B, usize), TensorSum<S>>,
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=n + 1 - parts {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl<'a, C: AInfCoalgebra, S: Label> TreeSums<'a, C, S> {
    fn new(c: &'a C, r: &'a Retract<C::B, S>) -> Self {
        TreeSums {
            c,
            r,
            memo: HashMap::new(),
        }
    }

    /// What sits below a slot feeding `m` leaves: `p` for a leaf, otherwise
    /// the subtree sum after the homotopy. The desuspended homotopy is `−H`
    /// and every internal edge carries a further sign −1, so the net map is
    /// `ρ_m ∘ H`.
    fn slot(&mut self, m: usize, b: &C::B) -> Result<TensorSum<S>> {
        if m == 1 {
            return Ok((self.r.proj)(b).map_basis(|s| Word::single(s.clone())));
        }
        let hb = (self.r.homotopy)(b);
        let mut out = Vector::zero();
        for (y, c) in hb.iter() {
            let v = self.rho(m, y)?;
            out.add_scaled(&v, c);
        }
        Ok(out)
    }

    fn rho(&mut self, n: usize, y: &C::B) -> Result<TensorSum<S>> {
        if n == 1 {
            return self.slot(1, y);
        }
        if let Some(v) = self.memo.get(&(y.clone(), n)) {
            return Ok(v.clone());
        }
        let mut out = Vector::zero();
        for k in 2..=n.min(self.c.arity_cap()) {
            let dk = shifted_delta(self.c, k, y)?;
            if dk.is_zero() {
                continue;
            }
            for comp in compositions(n, k) {
                for (w, coef) in dk.iter() {
                    let mut acc: Option<TensorSum<S>> = None;
                    for (b, &m) in w.factors().iter().zip(&comp) {
                        let s = self.slot(m, b)?;
                        if s.is_zero() {
                            acc = None;
                            break;
                        }
                        acc = Some(match acc {
                            None => s,
                            Some(a) => crate::tensor::tensor(&a, &s),
                        });
                    }
                    if let Some(a) = acc {
                        out.add_scaled(&a, coef);
                    }
                }
            }
        }
        self.memo.insert((y.clone(), n), out.clone());
        Ok(out)
    }
}

/// Full (unpruned) evaluation of one tree on a big basis element, in big
/// words; `p` is applied by the caller.
fn eval_tree<C: AInfCoalgebra, S: Label>(
    c: &C,
    r: &Retract<C::B, S>,
    t: &PlanarTree,
    y: &C::B,
) -> Result<TensorSum<C::B>> {
    match t {
        PlanarTree::Leaf => Ok(Vector::basis(Word::single(y.clone()))),
        PlanarTree::Node(children) => {
            let k = children.len();
            if k > c.arity_cap() {
                return Ok(Vector::zero());
            }
            let mut out = Vector::zero();
            for (w, coef) in shifted_delta(c, k, y)?.iter() {
                let mut acc: Option<TensorSum<C::B>> = None;
                for (b, ch) in w.factors().iter().zip(children) {
                    let s = match ch {
                        PlanarTree::Leaf => Vector::basis(Word::single(b.clone())),
                        _ => (r.homotopy)(b).try_map_linear(|z| eval_tree(c, r, ch, z))?,
                    };
                    acc = Some(match acc {
                        None => s,
                        Some(a) => crate::tensor::tensor(&a, &s),
                    });
                }
                if let Some(a) = acc {
                    out.add_scaled(&a, coef);
                }
            }
            Ok(out)
        }
    }
}

fn project_words<B: Label, S: Label>(r: &Retract<B, S>, v: &TensorSum<B>) -> TensorSum<S> {
    let mut out = Vector::zero();
    for (w, c) in v.iter() {
        let slots: Vec<Vector<S>> = w.factors().iter().map(|b| (r.proj)(b)).collect();
        for (f, x) in crate::tensor::tensor_all(&slots).iter() {
            out.add_term(Word::new(f.clone()).unwrap(), c * x);
        }
    }
    out
}

/// Transfers `c` along `r` up to arity `max_arity` using the default options.
pub fn transfer<C: AInfCoalgebra, S: Label>(
    c: &C,
    r: &Retract<C::B, S>,
    max_arity: usize,
) -> Result<FiniteCoalgebra<S>> {
    transfer_with(c, r, max_arity, TransferOptions::default())
}

/// `δ̃_n = Σ_t ± p^{⊗n} ∘ t(δ, H) ∘ i` over planar trees `t` with `n` leaves,
/// each tree counted once; `δ̃_1 = p∘δ_1∘i`.
pub fn transfer_with<C: AInfCoalgebra, S: Label>(
    c: &C,
    r: &Retract<C::B, S>,
    max_arity: usize,
    opts: TransferOptions,
) -> Result<FiniteCoalgebra<S>> {
    if max_arity == 0 {
        return Err(Error::input("max arity must be ≥ 1"));
    }
    let mut out = FiniteCoalgebra::new(r.small_basis.clone(), max_arity);
    let mut sums = TreeSums::new(c, r);
    for x in &r.small_basis {
        let ix = (r.incl)(x);
        for n in 1..=max_arity {
            let shifted = if n == 1 {
                let mut v = Vector::zero();
                for (y, a) in ix.iter() {
                    let d = shifted_delta(c, 1, y)?;
                    v.add_scaled(&project_words(r, &d), a);
                }
                v
            } else if opts.prune {
                ix.try_map_linear(|y| sums.rho(n, y))?
            } else {
                unpruned(c, r, n, &ix)?
            };
            if opts.cross_check && n > 1 {
                let other = if opts.prune {
                    unpruned(c, r, n, &ix)?
                } else {
                    ix.try_map_linear(|y| sums.rho(n, y))?
                };
                if other != shifted {
                    return Err(Error::internal(format!(
                        "pruned and unpruned tree sums differ at arity {n} on {x:?}"
                    )));
                }
            }
            out.set(n, x.clone(), shift(&shifted))?;
        }
    }
    Ok(out)
}

fn unpruned<C: AInfCoalgebra, S: Label>(
    c: &C,
    r: &Retract<C::B, S>,
    n: usize,
    ix: &Vector<C::B>,
) -> Result<TensorSum<S>> {
    let mut out = Vector::zero();
    for t in planar_trees(n) {
        for (y, a) in ix.iter() {
            let v = eval_tree(c, r, &t, y)?;
            out.add_scaled(&project_words(r, &v), a);
        }
    }
    Ok(out)
}

/// Per-arity outcome of comparing transfers across retract levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub max_arity: usize,
    pub levels: Vec<u32>,
    pub agree: bool,
}

/// Transfers the dual forms along `(θ, ω_N, K_N)` for `N = K+1, …, K+4` and
/// requires the results to coincide.
pub fn stabilized_transfer(max_arity: usize) -> Result<(FiniteCoalgebra<crate::interval::Cell>, StabilizationReport)> {
    if max_arity == 0 {
        return Err(Error::input("max arity must be ≥ 1"));
    }
    let base = (max_arity + 1) as u32;
    let levels: Vec<u32> = (base..base + 4).collect();
    let mut first: Option<FiniteCoalgebra<crate::interval::Cell>> = None;
    for &n in &levels {
        let r = crate::retract::make_interval_retract(n)?;
        let t = transfer(&DualForms, &r, max_arity)?;
        match &first {
            None => first = Some(t),
            Some(f) if *f != t => {
                return Err(Error::internal(format!(
                    "transfer at level {n} differs from level {base} up to arity {max_arity}"
                )))
            }
            Some(_) => {}
        }
    }
    let report = StabilizationReport {
        max_arity,
        levels,
        agree: true,
    };
    Ok((first.unwrap(), report))
}

/// Components `i_k : small → big^{⊗k}` (displayed convention) extending the
/// inclusion to an ∞-morphism, from the perturbation lemma applied to the
/// tensor-algebra contraction.
pub struct InfinityInclusion<B: Label, S: Label> {
    pub max_arity: usize,
    components: BTreeMap<(S, usize), TensorSum<B>>,
    transferred: BTreeMap<(S, usize), TensorSum<S>>,
}

impl<B: Label, S: Label> InfinityInclusion<B, S> {
    pub fn component(&self, k: usize, x: &S) -> TensorSum<B> {
        self.components.get(&(x.clone(), k)).map(shift).unwrap_or_default()
    }

    /// The transferred cooperation produced alongside (displayed convention).
    pub fn transferred(&self, k: usize, x: &S) -> TensorSum<S> {
        self.transferred.get(&(x.clone(), k)).map(shift).unwrap_or_default()
    }
}

/// Desuspended derivation `Σ_{k ∈ ks} Δ_k` applied to a sum of words, keeping
/// words of length `≤ max_len`.
fn derivation<C: AInfCoalgebra>(
    c: &C,
    v: &TensorSum<C::B>,
    ks: std::ops::RangeInclusive<usize>,
    max_len: usize,
) -> Result<TensorSum<C::B>> {
    let mut out = Vector::zero();
    for (w, coef) in v.iter() {
        for r in 0..w.len() {
            for k in ks.clone() {
                if k > c.arity_cap() || w.len() + k - 1 > max_len {
                    continue;
                }
                let d = shifted_delta(c, k, &w.factors()[r])?;
                if !d.is_zero() {
                    insert_at(w, r, &d, &mut out, coef);
                }
            }
        }
    }
    Ok(out)
}

/// Tensor-trick homotopy `Σ_j (ip)^{⊗(j−1)} ⊗ H' ⊗ id` with `H' = −H`.
fn tensor_homotopy<B: Label, S: Label>(r: &Retract<B, S>, v: &TensorSum<B>) -> TensorSum<B> {
    let mut out = Vector::zero();
    for (w, coef) in v.iter() {
        let f = w.factors();
        for j in 0..f.len() {
            let mut slots: Vec<Vector<B>> = Vec::with_capacity(f.len());
            for b in &f[..j] {
                slots.push(r.i(&(r.proj)(b)));
            }
            slots.push(-(r.homotopy)(&f[j]));
            for b in &f[j + 1..] {
                slots.push(Vector::basis(b.clone()));
            }
            let passed: i64 = f[..j].iter().map(sdeg).sum();
            let c = if passed.rem_euclid(2) == 1 { -coef.clone() } else { coef.clone() };
            for (g, x) in crate::tensor::tensor_all(&slots).iter() {
                out.add_term(Word::new(g.clone()).unwrap(), &c * x);
            }
        }
    }
    out
}

/// Runs the perturbation lemma on generators: returns the inclusion `i_∞`
/// and the transferred cooperations it intertwines.
pub fn transfer_i_infinity<C: AInfCoalgebra, S: Label>(
    c: &C,
    r: &Retract<C::B, S>,
    max_arity: usize,
) -> Result<InfinityInclusion<C::B, S>> {
    if max_arity == 0 {
        return Err(Error::input("max arity must be ≥ 1"));
    }
    let mut components = BTreeMap::new();
    let mut transferred = BTreeMap::new();
    for x in &r.small_basis {
        let ix: TensorSum<C::B> = (r.incl)(x).map_basis(|b| Word::single(b.clone()));
        // A = Σ_m (δ h)^m δ with h = −H'_T.
        let mut a_total = Vector::zero();
        let mut cur = derivation(c, &ix, 2..=max_arity, max_arity)?;
        while !cur.is_zero() {
            a_total += &cur;
            let h = -tensor_homotopy(r, &cur);
            cur = derivation(c, &h, 2..=max_arity, max_arity)?;
        }
        let ha = -tensor_homotopy(r, &a_total);
        let incl = ix.clone() + ha;
        let pa = project_words(r, &a_total);
        let mut d1 = Vector::zero();
        for (w, k) in derivation(c, &ix, 1..=1, 1)?.iter() {
            d1.add_scaled(&project_words(r, &Vector::basis(w.clone())), k);
        }
        let small = pa + d1;
        for k in 1..=max_arity {
            let ik = incl.filter(|w| w.len() == k);
            if !ik.is_zero() {
                components.insert((x.clone(), k), ik);
            }
            let sk = small.filter(|w| w.len() == k);
            if !sk.is_zero() {
                transferred.insert((x.clone(), k), sk);
            }
        }
    }
    Ok(InfinityInclusion {
        max_arity,
        components,
        transferred,
    })
}

/// Arity-`n` component of `D∘F − F∘D̃` on `x`, where `F` is the algebra map
/// on tensor words determined by `f_k = i_k` and `D̃` comes from `small`.
pub fn infinity_morphism_defect<C: AInfCoalgebra, S: Label>(
    c: &C,
    small: &FiniteCoalgebra<S>,
    f: &InfinityInclusion<C::B, S>,
    n: usize,
    x: &S,
) -> Result<TensorSum<C::B>> {
    if n > f.max_arity || n > small.arity_cap() {
        return Err(Error::input(format!("arity {n} beyond the computed range")));
    }
    let shifted_f = |k: usize, s: &S| -> TensorSum<C::B> { f.components.get(&(s.clone(), k)).cloned().unwrap_or_default() };
    // D ∘ F
    let mut lhs = Vector::zero();
    for m in 1..=n {
        let fm = shifted_f(m, x);
        if fm.is_zero() {
            continue;
        }
        let d = derivation(c, &fm, (n + 1 - m)..=(n + 1 - m), n)?;
        lhs += d;
    }
    // F ∘ D̃
    let mut rhs = Vector::zero();
    for k in 1..=n {
        let dk = shifted_delta(small, k, x)?;
        for comp in compositions(n, k) {
            for (w, coef) in dk.iter() {
                let mut acc: Option<TensorSum<C::B>> = None;
                for (s, &m) in w.factors().iter().zip(&comp) {
                    let v = shifted_f(m, s);
                    acc = Some(match acc {
                        None => v,
                        Some(a) => crate::tensor::tensor(&a, &v),
                    });
                }
                if let Some(a) = acc {
                    rhs.add_scaled(&a, coef);
                }
            }
        }
    }
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Cell;
    use crate::retract::make_interval_retract;
    use crate::scalar::{frac, q};

    fn w(cells: &[Cell]) -> Word<Cell> {
        Word::new(cells.to_vec()).unwrap()
    }

    #[test]
    fn dual_forms_are_coherent() {
        let basis = crate::interval::dual_basis_upto(6);
        assert!(coherence_failures(&DualForms, &basis, 4).unwrap().is_empty());
    }

    #[test]
    fn low_arity_transfer() {
        use Cell::*;
        let r = make_interval_retract(6).unwrap();
        let t = transfer(&DualForms, &r, 4).unwrap();
        assert_eq!(t.delta(1, &ZeroOne).unwrap(), Vector::from_terms([(w(&[One]), q(1)), (w(&[Zero]), q(-1))]));
        assert_eq!(t.delta(2, &Zero).unwrap(), Vector::basis(w(&[Zero, Zero])));
        assert_eq!(t.delta(2, &One).unwrap(), Vector::basis(w(&[One, One])));
        let d2 = t.delta(2, &ZeroOne).unwrap();
        let half = frac(1, 2);
        let expected = Vector::from_terms([
            (w(&[ZeroOne, Zero]), half.clone()),
            (w(&[ZeroOne, One]), half.clone()),
            (w(&[Zero, ZeroOne]), half.clone()),
            (w(&[One, ZeroOne]), half),
        ]);
        assert_eq!(d2, expected);
        let d3 = t.delta(3, &ZeroOne).unwrap();
        let mut mags: Vec<Q> = d3.iter().map(|(_, c)| crate::scalar::abs(c)).collect();
        mags.sort();
        mags.dedup();
        assert_eq!(mags, vec![frac(1, 12), frac(1, 6)]);
        assert!(t.delta(4, &ZeroOne).unwrap().is_zero());
        assert!(t.delta(3, &Zero).unwrap().is_zero());
    }

    #[test]
    fn transferred_structure_is_coherent() {
        let r = make_interval_retract(8).unwrap();
        let t = transfer(&DualForms, &r, 6).unwrap();
        assert!(coherence_failures(&t, r.small_basis.as_slice(), 6).unwrap().is_empty());
    }

    #[test]
    fn pruned_and_unpruned_agree() {
        let r = make_interval_retract(6).unwrap();
        let opts = TransferOptions {
            prune: true,
            cross_check: true,
        };
        let a = transfer_with(&DualForms, &r, 5, opts).unwrap();
        let b = transfer_with(&DualForms, &r, 5, TransferOptions { prune: false, cross_check: false }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn perturbation_lemma_matches_trees() {
        let r = make_interval_retract(7).unwrap();
        let t = transfer(&DualForms, &r, 5).unwrap();
        let f = transfer_i_infinity(&DualForms, &r, 5).unwrap();
        for x in &r.small_basis {
            for k in 1..=5 {
                assert_eq!(f.transferred(k, x), t.delta(k, x).unwrap(), "arity {k} on {x:?}");
            }
            for n in 1..=5 {
                let d = infinity_morphism_defect(&DualForms, &t, &f, n, x).unwrap();
                assert!(d.is_zero(), "arity {n} on {x:?}: {d:?}");
            }
        }
    }

    #[test]
    fn identity_retract_transfers_identically() {
        let r = make_interval_retract(4).unwrap();
        let t = transfer(&DualForms, &r, 3).unwrap();
        let id: Retract<Cell, Cell> = Retract {
            d_big: std::sync::Arc::new(crate::interval::cech_d_basis),
            d_small: std::sync::Arc::new(crate::interval::cech_d_basis),
            proj: std::sync::Arc::new(|c: &Cell| Vector::basis(*c)),
            incl: std::sync::Arc::new(|c: &Cell| Vector::basis(*c)),
            homotopy: std::sync::Arc::new(|_: &Cell| Vector::zero()),
            big_sample: crate::interval::CELLS.to_vec(),
            small_basis: crate::interval::CELLS.to_vec(),
        };
        assert_eq!(transfer(&t, &id, 3).unwrap(), t);
    }
}
