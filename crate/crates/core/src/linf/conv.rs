//! A∞-algebras and the L∞-algebras built from homotopy morphisms: the
//! convolution algebra `Hom(C, A)` and the algebra `L(X, Y)` on
//! `Hom(s·Bar(X), Y)`.
//!
//! Both are assembled on the shifted side. For an A∞-algebra the shifted
//! operations are `b_k(sx_1, …, sx_k) = (−1)^{k + Σ_i (k−i)|sx_i|} s m_k(x)`,
//! mirroring the coalgebra convention. A family `M_k` of degree −1 maps on
//! the Hom space whose Maurer–Cartan equation is the morphism equation is
//! symmetrized, `λ_k = Σ_σ ε(σ) M_k ∘ σ`, and brought back to `ℓ_k` by the
//! same décalage as in the parent module.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::Deserialize;

use super::curves::{Form, OmegaT};
use super::{mc_defect, Element, LInf};
use crate::ainf::{shifted_delta, AInfCoalgebra, FiniteCoalgebra, Label};
use crate::error::{Error, Result};
use crate::scalar::{self, Q};
use crate::sign::{koszul_odd, permutations};
use crate::vector::Vector;

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

fn signed(v: Element, neg: bool) -> Element {
    if neg {
        -v
    } else {
        v
    }
}

/// An A∞-algebra with operations `m_k` of degree `k − 2` on a finite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfAlgebra {
    names: Vec<String>,
    degrees: Vec<i64>,
    cap: usize,
    ops: BTreeMap<Vec<usize>, Element>,
}

impl AInfAlgebra {
    pub fn new(basis: &[(&str, i64)], cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::input("arity cap must be ≥ 1"));
        }
        Ok(AInfAlgebra {
            names: basis.iter().map(|b| b.0.to_string()).collect(),
            degrees: basis.iter().map(|b| b.1).collect(),
            cap,
            ops: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::input(format!("unknown basis element {name}")))
    }

    pub fn set(&mut self, args: &[usize], value: Element) -> Result<()> {
        let k = args.len();
        if k == 0 || k > self.cap {
            return Err(Error::input(format!("arity {k} outside 1..={}", self.cap)));
        }
        if args.iter().chain(value.support()).any(|&i| i >= self.dim()) {
            return Err(Error::input("basis index out of range"));
        }
        let want = args.iter().map(|&i| self.degrees[i]).sum::<i64>() + k as i64 - 2;
        if value.support().any(|&o| self.degrees[o] != want) {
            return Err(Error::input(format!("m_{k} output must have degree {want}")));
        }
        if value.is_zero() {
            self.ops.remove(args);
        } else {
            self.ops.insert(args.to_vec(), value);
        }
        Ok(())
    }

    pub fn set_named(&mut self, args: &[&str], value: &[(&str, Q)]) -> Result<()> {
        let idx = args.iter().map(|n| self.index(n)).collect::<Result<Vec<_>>>()?;
        let mut v = Vector::zero();
        for (n, c) in value {
            v.add_term(self.index(n)?, c.clone());
        }
        self.set(&idx, v)
    }

    pub fn op(&self, args: &[usize]) -> Element {
        self.ops.get(args).cloned().unwrap_or_default()
    }

    /// Largest arity with a nonzero operation.
    pub fn max_arity(&self) -> usize {
        self.ops.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn sdeg(&self, i: usize) -> i64 {
        self.degrees[i] + 1
    }

    /// `b_k` on shifted basis elements.
    pub fn b(&self, args: &[usize]) -> Element {
        let k = args.len();
        let mut e = k as i64;
        for (i, &a) in args.iter().enumerate() {
            e += (k - 1 - i) as i64 * self.sdeg(a);
        }
        signed(self.op(args), odd(e))
    }

    /// The bar codifferential `D` on a word of shifted generators, keeping
    /// all output words.
    pub fn bar_d(&self, word: &[usize]) -> Vector<Vec<usize>> {
        let mut out = Vector::zero();
        let mut passed = 0i64;
        for r in 0..word.len() {
            for k in 1..=(word.len() - r).min(self.cap) {
                let v = self.b(&word[r..r + k]);
                for (&o, c) in v.iter() {
                    let mut w = word[..r].to_vec();
                    w.push(o);
                    w.extend_from_slice(&word[r + k..]);
                    out.add_term(w, if odd(passed) { -c.clone() } else { c.clone() });
                }
            }
            passed += self.sdeg(word[r]);
        }
        out
    }

    /// `D²` on every word of length `≤ n`; the nonzero results.
    pub fn coherence_failures(&self, n: usize) -> Vec<(Vec<usize>, Vector<Vec<usize>>)> {
        let mut out = Vec::new();
        for w in words_upto(self.dim(), n) {
            let d = self.bar_d(&w);
            let mut dd = Vector::zero();
            for (u, c) in d.iter() {
                dd.add_scaled(&self.bar_d(u), c);
            }
            if !dd.is_zero() {
                out.push((w, dd));
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::input(format!("algebra file: {e}")))?;
        let basis: Vec<(&str, i64)> = file.basis.iter().map(|b| (b.name.as_str(), b.degree)).collect();
        let max_arity = file.operations.keys().filter_map(|k| k.parse::<usize>().ok()).max();
        let cap = file.arity_cap.or(max_arity).unwrap_or(2).max(1);
        let mut a = AInfAlgebra::new(&basis, cap)?;
        for (k, rules) in file.operations {
            let k: usize = k
                .parse()
                .map_err(|_| Error::input(format!("operation arity {k} is not an integer")))?;
            for r in rules {
                if r.inputs.len() != k {
                    return Err(Error::input(format!("arity-{k} operation lists {} inputs", r.inputs.len())));
                }
                let idx = r.inputs.iter().map(|n| a.index(n)).collect::<Result<Vec<_>>>()?;
                let mut v = Vector::zero();
                for (n, c) in &r.output {
                    v.add_term(a.index(n)?, scalar::parse(c)?);
                }
                a.set(&idx, v)?;
            }
        }
        Ok(a)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    basis: Vec<AlgebraBasis>,
    #[serde(default)]
    arity_cap: Option<usize>,
    #[serde(default)]
    operations: BTreeMap<String, Vec<OpRule>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraBasis {
    name: String,
    degree: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpRule {
    inputs: Vec<String>,
    output: BTreeMap<String, String>,
}

/// Words of length `1..=n` over `0..dim`, shortest first.
pub fn words_upto(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..dim {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Shared machinery: an L∞-algebra presented by `M_k` on the shifted side.
trait Presented {
    fn pdim(&self) -> usize;
    /// Degree on the shifted side (`ℓ`-degree + 1).
    fn wdeg(&self, i: usize) -> i64;
    fn m(&self, args: &[usize]) -> Element;
}

fn lambda_from_m<P: Presented>(p: &P, args: &[usize]) -> Element {
    let degs: Vec<i64> = args.iter().map(|&i| p.wdeg(i)).collect();
    let mut out = Vector::zero();
    for sigma in permutations(args.len()) {
        let permuted: Vec<usize> = sigma.iter().map(|&s| args[s]).collect();
        let v = p.m(&permuted);
        if v.is_zero() {
            continue;
        }
        out += signed(v, koszul_odd(&sigma, &degs));
    }
    out
}

fn ell_from_m<P: Presented>(p: &P, args: &[usize]) -> Element {
    let k = args.len();
    let mut e = k * (k - 1) / 2;
    for (i, &a) in args.iter().enumerate() {
        if odd(p.wdeg(a) - 1) {
            e += k - 1 - i;
        }
    }
    signed(lambda_from_m(p, args), e % 2 == 1)
}

type Cache = Mutex<HashMap<Vec<usize>, Element>>;

fn cached(cache: &Cache, args: &[usize], f: impl FnOnce() -> Element) -> Element {
    if let Some(v) = cache.lock().unwrap().get(args) {
        return v.clone();
    }
    let v = f();
    cache.lock().unwrap().insert(args.to_vec(), v.clone());
    v
}

/// The convolution L∞-algebra on `Hom(C, A)` for a finite A∞-coalgebra `C`
/// and a dg associative algebra `A`. Basis element `(c, a)` sends `c` to
/// `a` and the other basis elements of `C` to zero; its degree is
/// `|a| − |c|`.
pub struct ConvLInf<B: Label> {
    coalgebra: FiniteCoalgebra<B>,
    algebra: AInfAlgebra,
    cap: usize,
    /// For each source word, the targets `c` with `Δ_k(c) ∋ word`.
    preimages: HashMap<Vec<usize>, Vec<(usize, Q)>>,
    higher_sign_by_degree: bool,
    cache: Cache,
}

/// Builds `Hom(C, A)`. `C` must be finite; `A` must have `m_k = 0` for
/// `k ≥ 3`.
pub fn conv_linf<B: Label>(c: &FiniteCoalgebra<B>, a: &AInfAlgebra) -> Result<ConvLInf<B>> {
    conv_linf_with(c, a, true)
}

/// As [`conv_linf`]; `higher_sign_by_degree` selects the sign
/// `−(−1)^{Σ|g_i|}` (true) or `−1` (false) in front of the higher terms.
/// Only the first yields an L∞-algebra in general.
pub fn conv_linf_with<B: Label>(c: &FiniteCoalgebra<B>, a: &AInfAlgebra, higher_sign_by_degree: bool) -> Result<ConvLInf<B>> {
    if a.max_arity() > 2 {
        return Err(Error::input("the target must be a dg associative algebra"));
    }
    let basis = c.basis();
    let pos = |b: &B| basis.iter().position(|x| x == b).unwrap();
    let mut preimages: HashMap<Vec<usize>, Vec<(usize, Q)>> = HashMap::new();
    for (ci, x) in basis.iter().enumerate() {
        for k in 1..=c.arity_cap() {
            for (w, coef) in shifted_delta(c, k, x)?.iter() {
                let key: Vec<usize> = w.factors().iter().map(pos).collect();
                preimages.entry(key).or_default().push((ci, coef.clone()));
            }
        }
    }
    Ok(ConvLInf {
        coalgebra: c.clone(),
        algebra: a.clone(),
        cap: c.arity_cap(),
        preimages,
        higher_sign_by_degree,
        cache: Default::default(),
    })
}

impl<B: Label> ConvLInf<B> {
    pub fn index(&self, c: usize, a: usize) -> usize {
        c * self.algebra.dim() + a
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.algebra.dim(), i % self.algebra.dim())
    }

    fn product(&self, a: &[usize]) -> Element {
        let mut acc: Element = Vector::basis(a[0]);
        for &x in &a[1..] {
            acc = acc.map_linear(|&y| self.algebra.op(&[y, x]));
            if acc.is_zero() {
                break;
            }
        }
        acc
    }
}

impl<B: Label> Presented for ConvLInf<B> {
    fn pdim(&self) -> usize {
        self.coalgebra.basis().len() * self.algebra.dim()
    }

    fn wdeg(&self, i: usize) -> i64 {
        let (c, a) = self.split(i);
        self.algebra.degree(a) - self.coalgebra.basis()[c].degree() + 1
    }

    fn m(&self, args: &[usize]) -> Element {
        let k = args.len();
        let parts: Vec<(usize, usize)> = args.iter().map(|&i| self.split(i)).collect();
        let mut out = Vector::zero();
        if k == 1 {
            let (c, a) = parts[0];
            out += self.algebra.op(&[a]).map_basis(|&o| self.index(c, o));
            let neg = !odd(self.wdeg(args[0]));
            if let Some(list) = self.preimages.get(&vec![c]) {
                for (t, coef) in list {
                    out.add_term(self.index(*t, a), if neg { -coef.clone() } else { coef.clone() });
                }
            }
            return out;
        }
        let sources: Vec<usize> = parts.iter().map(|p| p.0).collect();
        let Some(list) = self.preimages.get(&sources) else {
            return out;
        };
        let targets: Vec<usize> = parts.iter().map(|p| p.1).collect();
        let prod = self.product(&targets);
        if prod.is_zero() {
            return out;
        }
        // (g_1 ⊗ … ⊗ g_k)(v_1 ⊗ … ⊗ v_k): g_i passes v_j for j < i.
        let mut e = 0i64;
        for (i, &g) in args.iter().enumerate().take(k) {
            for &src in &sources[..i] {
                e += self.wdeg(g) * (self.coalgebra.basis()[src].degree() - 1);
            }
        }
        let mut neg = !odd(e);
        if self.higher_sign_by_degree {
            let total: i64 = args.iter().map(|&i| self.wdeg(i)).sum();
            neg ^= odd(total);
        }
        for (t, coef) in list {
            let c = if neg { -coef.clone() } else { coef.clone() };
            out.add_scaled(&prod.map_basis(|&o| self.index(*t, o)), &c);
        }
        out
    }
}

impl<B: Label> LInf for ConvLInf<B> {
    fn dim(&self) -> usize {
        self.pdim()
    }
    fn degree(&self, i: usize) -> i64 {
        self.wdeg(i) - 1
    }
    fn name(&self, i: usize) -> String {
        let (c, a) = self.split(i);
        format!("{:?}*⊗{}", self.coalgebra.basis()[c], self.algebra.name(a))
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        debug_assert_eq!(k, args.len());
        if k > self.cap {
            return Vector::zero();
        }
        cached(&self.cache, args, || ell_from_m(self, args))
    }
}

/// `L(X, Y)`: maps from bar words of `X` of length `≤ word_cap` to `sY`.
/// Basis element `(u, y)` sends the word `u` to `sy`; its weight is the
/// length of `u`.
pub struct Lxy {
    x: AInfAlgebra,
    y: AInfAlgebra,
    arity_cap: usize,
    word_cap: usize,
    words: Vec<Vec<usize>>,
    word_index: HashMap<Vec<usize>, usize>,
    /// For each word `u`, the words `w` with `D_X(w) ∋ u`.
    d_preimages: HashMap<usize, Vec<(usize, Q)>>,
    cache: Cache,
}

pub fn lxy_build(x: &AInfAlgebra, y: &AInfAlgebra, arity_cap: usize, word_cap: usize) -> Result<Lxy> {
    if arity_cap == 0 || word_cap == 0 {
        return Err(Error::input("caps must be ≥ 1"));
    }
    if x.dim() == 0 || y.dim() == 0 {
        return Err(Error::input("algebras must be nonzero"));
    }
    let words = words_upto(x.dim(), word_cap);
    let word_index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let mut d_preimages: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
    for (wi, w) in words.iter().enumerate() {
        for (u, c) in x.bar_d(w).iter() {
            if let Some(&ui) = word_index.get(u) {
                d_preimages.entry(ui).or_default().push((wi, c.clone()));
            }
        }
    }
    Ok(Lxy {
        x: x.clone(),
        y: y.clone(),
        arity_cap,
        word_cap,
        words,
        word_index,
        d_preimages,
        cache: Default::default(),
    })
}

impl Lxy {
    pub fn index(&self, word: &[usize], y: usize) -> Option<usize> {
        self.word_index.get(word).map(|&w| w * self.y.dim() + y)
    }

    pub fn split(&self, i: usize) -> (&[usize], usize) {
        (&self.words[i / self.y.dim()], i % self.y.dim())
    }

    pub fn word_cap(&self) -> usize {
        self.word_cap
    }

    pub fn x(&self) -> &AInfAlgebra {
        &self.x
    }

    pub fn y(&self) -> &AInfAlgebra {
        &self.y
    }

    /// Random basis tuples of length `1..=n` whose words fit together under
    /// the word cap.
    pub fn random_tuples<R: rand::Rng>(&self, n: usize, draws: usize, rng: &mut R) -> Vec<Vec<usize>> {
        (0..draws)
            .map(|_| {
                let len = rng.gen_range(1..=n);
                let mut budget = self.word_cap;
                let mut t = Vec::new();
                while t.len() < len && budget > 0 {
                    let wl = rng.gen_range(1..=budget);
                    budget -= wl;
                    let w: Vec<usize> = (0..wl).map(|_| rng.gen_range(0..self.x.dim())).collect();
                    t.push(self.index(&w, rng.gen_range(0..self.y.dim())).unwrap());
                }
                t
            })
            .collect()
    }

    fn word_sdeg(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.x.sdeg(i)).sum()
    }
}

impl Presented for Lxy {
    fn pdim(&self) -> usize {
        self.words.len() * self.y.dim()
    }

    fn wdeg(&self, i: usize) -> i64 {
        let (w, y) = self.split(i);
        self.y.sdeg(y) - self.word_sdeg(w)
    }

    fn m(&self, args: &[usize]) -> Element {
        let k = args.len();
        let mut out = Vector::zero();
        if k == 1 {
            let (u, y) = self.split(args[0]);
            let ui = args[0] / self.y.dim();
            for (&o, c) in self.y.b(&[y]).iter() {
                out.add_term(self.index(u, o).unwrap(), c.clone());
            }
            let neg = !odd(self.wdeg(args[0]));
            if let Some(list) = self.d_preimages.get(&ui) {
                for (wi, c) in list {
                    out.add_term(wi * self.y.dim() + y, if neg { -c.clone() } else { c.clone() });
                }
            }
            return out;
        }
        let total: usize = args.iter().map(|&i| self.split(i).0.len()).sum();
        if total > self.word_cap || k > self.y.cap() {
            return out;
        }
        let mut word = Vec::with_capacity(total);
        let mut ys = Vec::with_capacity(k);
        let mut e = 0i64;
        for &a in args {
            let (u, y) = self.split(a);
            e += self.wdeg(a) * self.word_sdeg(&word);
            word.extend_from_slice(u);
            ys.push(y);
        }
        let v = self.y.b(&ys);
        if v.is_zero() {
            return out;
        }
        for (&o, c) in v.iter() {
            out.add_term(self.index(&word, o).unwrap(), if odd(e) { -c.clone() } else { c.clone() });
        }
        out
    }
}

impl LInf for Lxy {
    fn dim(&self) -> usize {
        self.pdim()
    }
    fn degree(&self, i: usize) -> i64 {
        self.wdeg(i) - 1
    }
    fn weight(&self, i: usize) -> u32 {
        self.split(i).0.len() as u32
    }
    fn name(&self, i: usize) -> String {
        let (w, y) = self.split(i);
        let word: Vec<&str> = w.iter().map(|&x| self.x.name(x)).collect();
        format!("[{}]↦{}", word.join("|"), self.y.name(y))
    }
    fn arity_cap(&self) -> usize {
        self.arity_cap
    }
    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        debug_assert_eq!(k, args.len());
        if k > self.arity_cap {
            return Vector::zero();
        }
        let total: usize = args.iter().map(|&i| self.split(i).0.len()).sum();
        if total > self.word_cap {
            return Vector::zero();
        }
        cached(&self.cache, args, || ell_from_m(self, args))
    }
}

/// Encodes a morphism given by its components `f_n` on words into an
/// element of `L(X, Y)`: `phi[word] = Σ c·sy`.
pub fn lxy_element(l: &Lxy, phi: &BTreeMap<Vec<usize>, Element>) -> Result<Element> {
    let mut out = Vector::zero();
    for (w, v) in phi {
        for (&y, c) in v.iter() {
            let i = l
                .index(w, y)
                .ok_or_else(|| Error::input("map defined on a word beyond the word cap"))?;
            out.add_term(i, c.clone());
        }
    }
    Ok(out)
}

/// The strict identity `sx ↦ sx` on words of length one.
pub fn identity_morphism(l: &Lxy) -> Result<Element> {
    if l.x != l.y {
        return Err(Error::input("identity needs X = Y"));
    }
    let mut phi = BTreeMap::new();
    for i in 0..l.x.dim() {
        phi.insert(vec![i], Vector::basis(i));
    }
    lxy_element(l, &phi)
}

/// `Y ⊗ Ω_T` as an A∞-algebra: `m_1 = m_1 ⊗ 1 + 1 ⊗ d` and
/// `m_k(y_1ω_1, …, y_kω_k) = (−1)^{Σ_{i<j}|ω_i||y_j|} m_k(y) ⊗ ω_1⋯ω_k`.
/// Basis `y ⊗ ω` has index `y·(2T+1) + f` with `f = j` for `t^j` and
/// `T+1+j` for `t^j dt`.
pub fn omega_tensor(y: &AInfAlgebra, t: usize) -> Result<AInfAlgebra> {
    if t == 0 {
        return Err(Error::input("t-degree must be ≥ 1"));
    }
    let forms: Vec<Form> = (0..=t).map(Form::T).chain((0..t).map(Form::TDt)).collect();
    let fdeg = |f: &Form| -(matches!(f, Form::TDt(_)) as i64);
    let nf = forms.len();
    let mut names = Vec::new();
    for i in 0..y.dim() {
        for f in &forms {
            names.push((
                match f {
                    Form::T(0) => y.name(i).to_string(),
                    Form::T(j) => format!("{}·t^{j}", y.name(i)),
                    Form::TDt(j) => format!("{}·t^{j}dt", y.name(i)),
                },
                y.degree(i) + fdeg(f),
            ));
        }
    }
    let basis: Vec<(&str, i64)> = names.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    let mut out = AInfAlgebra::new(&basis, y.cap())?;
    let fpos = |f: Form| forms.iter().position(|g| *g == f).unwrap();
    let mul = |a: Form, b: Form| match (a, b) {
        (Form::T(x), Form::T(z)) if x + z <= t => Some(Form::T(x + z)),
        (Form::T(x), Form::TDt(z)) | (Form::TDt(z), Form::T(x)) if x + z < t => Some(Form::TDt(x + z)),
        _ => None,
    };
    // m_1, including the de Rham part.
    for i in 0..y.dim() {
        for (fi, &f) in forms.iter().enumerate() {
            let mut v: Element = y.op(&[i]).map_basis(|&o| o * nf + fi);
            if let Form::T(j) = f {
                if j >= 1 {
                    let c = Q::from_integer((j as i64).into());
                    v.add_term(i * nf + fpos(Form::TDt(j - 1)), if odd(y.degree(i)) { -c } else { c });
                }
            }
            out.set(&[i * nf + fi], v)?;
        }
    }
    for (args, value) in &y.ops {
        let k = args.len();
        if k < 2 {
            continue;
        }
        let mut choice = vec![0usize; k];
        loop {
            let mut form = Some(Form::T(0));
            let mut e = 0i64;
            for (a, &c) in choice.iter().enumerate() {
                form = form.and_then(|g| mul(g, forms[c]));
                for &later in &args[a + 1..] {
                    e += fdeg(&forms[c]) * y.degree(later);
                }
            }
            if let Some(g) = form {
                let idx: Vec<usize> = args.iter().zip(&choice).map(|(&a, &c)| a * nf + c).collect();
                let gi = fpos(g);
                out.set(&idx, signed(value.map_basis(|&o| o * nf + gi), odd(e)))?;
            }
            let mut p = 0;
            while p < k {
                choice[p] += 1;
                if choice[p] < nf {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
            if p == k {
                break;
            }
        }
    }
    Ok(out)
}

/// Caps for the concordance comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConcordanceCaps {
    pub arity: usize,
    pub word: usize,
    pub t: usize,
}

/// Coordinates shared by both defects: bar word, basis element of `Y`, form.
pub type ConcordanceKey = (Vec<usize>, usize, Form);

/// A degree 0 map `s·Bar(X) → s(Y ⊗ Ω_T)`, given on words.
pub type OmegaMap = BTreeMap<Vec<usize>, Vector<(usize, Form)>>;

fn form_index(t: usize, f: Form) -> usize {
    match f {
        Form::T(j) => j,
        Form::TDt(j) => t + 1 + j,
    }
}

fn form_degree(f: Form) -> i64 {
    -(matches!(f, Form::TDt(_)) as i64)
}

/// The two defects whose equality is the concordance / Maurer–Cartan
/// correspondence:
///
/// 1. the morphism equation `D_{Y⊗Ω} ∘ Φ − Φ ∘ D_X` of the coalgebra map
///    `Φ` induced by `φ`, projected to `s(Y ⊗ Ω)`;
/// 2. the Maurer–Cartan series of the corresponding element of
///    `L(X, Y) ⊗ Ω_T`.
///
/// The identification sends `(u ↦ s(y ⊗ ω))` to
/// `(−1)^{|ω|(|su|+1)}(u ↦ sy) ⊗ ω`; it is the only choice of the form
/// `(−1)^{|ω|(a|su| + b|sy| + c)}` under which the two sides agree.
pub fn concordance_defect_pair(
    x: &AInfAlgebra,
    y: &AInfAlgebra,
    phi: &OmegaMap,
    caps: ConcordanceCaps,
) -> Result<(Vector<ConcordanceKey>, Vector<ConcordanceKey>)> {
    concordance_defect_pair_with(x, y, phi, caps, |sw, _sy, f| odd(form_degree(f) * (sw + 1)))
}

pub(crate) fn concordance_defect_pair_with(
    x: &AInfAlgebra,
    y: &AInfAlgebra,
    phi: &OmegaMap,
    caps: ConcordanceCaps,
    ident: impl Fn(i64, i64, Form) -> bool,
) -> Result<(Vector<ConcordanceKey>, Vector<ConcordanceKey>)> {
    if caps.arity == 0 || caps.word == 0 || caps.t == 0 {
        return Err(Error::input("caps must be ≥ 1"));
    }
    let t = caps.t;
    let nf = 2 * t + 1;
    let yo = omega_tensor(y, t)?;
    let sdeg_word = |w: &[usize]| w.iter().map(|&i| x.sdeg(i)).sum::<i64>();
    let mut f: BTreeMap<Vec<usize>, Element> = BTreeMap::new();
    for (w, v) in phi {
        if w.is_empty() || w.len() > caps.word || w.iter().any(|&i| i >= x.dim()) {
            return Err(Error::input("map defined on a word outside the caps"));
        }
        let mut e = Vector::zero();
        for (&(yi, form), c) in v.iter() {
            let bad = match form {
                Form::T(j) => j > t,
                Form::TDt(j) => j >= t,
            };
            if yi >= y.dim() || bad {
                return Err(Error::input("map value outside Y ⊗ Ω_T"));
            }
            if y.sdeg(yi) + form_degree(form) != sdeg_word(w) {
                return Err(Error::input("the map must have degree 0"));
            }
            e.add_term(yi * nf + form_index(t, form), c.clone());
        }
        if !e.is_zero() {
            f.insert(w.clone(), e);
        }
    }
    let split = |i: usize| -> (usize, Form) {
        let (yi, fi) = (i / nf, i % nf);
        (yi, if fi <= t { Form::T(fi) } else { Form::TDt(fi - t - 1) })
    };

    // Defect 1: the morphism equation, word by word.
    let mut d1: Vector<ConcordanceKey> = Vector::zero();
    for w in words_upto(x.dim(), caps.word) {
        let mut acc: Element = Vector::zero();
        for (u, c) in x.bar_d(&w).iter() {
            if let Some(v) = f.get(u) {
                acc.add_scaled(v, &-c.clone());
            }
        }
        for k in 1..=caps.arity.min(w.len()).min(yo.cap()) {
            for cuts in compositions(w.len(), k) {
                let mut parts = Vec::with_capacity(k);
                let mut start = 0;
                for len in cuts {
                    match f.get(&w[start..start + len]) {
                        Some(v) => parts.push(v),
                        None => break,
                    }
                    start += len;
                }
                if parts.len() == k {
                    acc += multi_b(&yo, &parts);
                }
            }
        }
        let sw = sdeg_word(&w);
        for (&i, c) in acc.iter() {
            let (yi, form) = split(i);
            let neg = ident(sw, y.sdeg(yi), form);
            d1.add_term((w.clone(), yi, form), if neg { -c.clone() } else { c.clone() });
        }
    }

    // Defect 2: the Maurer–Cartan series in L(X, Y) ⊗ Ω_T.
    let l = lxy_build(x, y, caps.arity, caps.word)?;
    let o = OmegaT::new(&l, t)?;
    let mut psi: Element = Vector::zero();
    for (w, v) in &f {
        for (&i, c) in v.iter() {
            let (yi, form) = split(i);
            let neg = ident(sdeg_word(w), y.sdeg(yi), form);
            let li = l.index(w, yi).unwrap();
            psi.add_term(o.index(li, form), if neg { -c.clone() } else { c.clone() });
        }
    }
    let mc = mc_defect(&o, &psi, caps.arity)?;
    let mut d2: Vector<ConcordanceKey> = Vector::zero();
    for (&i, c) in mc.iter() {
        let (li, form) = o.split(i);
        let (w, yi) = l.split(li);
        d2.add_term((w.to_vec(), yi, form), c.clone());
    }
    Ok((d1, d2))
}

/// `b_k` extended multilinearly over the given values.
fn multi_b(a: &AInfAlgebra, parts: &[&Element]) -> Element {
    let mut out = Vector::zero();
    let mut idx = Vec::with_capacity(parts.len());
    fn rec(a: &AInfAlgebra, parts: &[&Element], idx: &mut Vec<usize>, c: Q, out: &mut Element) {
        if idx.len() == parts.len() {
            out.add_scaled(&a.b(idx), &c);
            return;
        }
        for (&i, x) in parts[idx.len()].iter() {
            idx.push(i);
            rec(a, parts, idx, &c * x, out);
            idx.pop();
        }
    }
    rec(a, parts, &mut idx, Q::from_integer(1.into()), &mut out);
    out
}

/// Ordered ways to write `n` as `k` positive parts.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A random sparse degree 0 map with at most `terms` nonzero components.
pub fn random_omega_map<R: rand::Rng>(
    x: &AInfAlgebra,
    y: &AInfAlgebra,
    caps: ConcordanceCaps,
    terms: usize,
    rng: &mut R,
) -> OmegaMap {
    let words = words_upto(x.dim(), caps.word);
    let mut targets: Vec<(usize, Form)> = Vec::new();
    for yi in 0..y.dim() {
        targets.extend((0..=caps.t).map(|j| (yi, Form::T(j))));
        targets.extend((0..caps.t).map(|j| (yi, Form::TDt(j))));
    }
    let mut out = OmegaMap::new();
    for _ in 0..terms * 8 {
        if out.values().map(|v| v.len()).sum::<usize>() >= terms {
            break;
        }
        let w = &words[rng.gen_range(0..words.len())];
        let sw: i64 = w.iter().map(|&i| x.sdeg(i)).sum();
        let fits: Vec<&(usize, Form)> = targets
            .iter()
            .filter(|(yi, f)| y.sdeg(*yi) + form_degree(*f) == sw)
            .collect();
        if fits.is_empty() {
            continue;
        }
        let target = *fits[rng.gen_range(0..fits.len())];
        let c = Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into());
        out.entry(w.clone()).or_default().add_term(target, c);
    }
    out
}
