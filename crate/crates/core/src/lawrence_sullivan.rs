//! Free graded Lie algebras with Hall normal forms, the Lawrence–Sullivan
//! differential, and the A∞-coalgebra on `⟨u, v, w⟩` it induces.
//!
//! Lie elements are stored through their image in the tensor algebra, where
//! `[x, y] = xy − (−1)^{|x||y|} yx`. Normal forms are computed by linear
//! algebra against the Hall basis one multidegree at a time.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::ainf::{FiniteCoalgebra, SignDictionary};
use crate::combinatorics::bernoulli_table;
use crate::error::{Error, Result};
use crate::interval::Cell;
use crate::linf::{bracket_elems, mc_defect, require_degree, Element, LInf};
use crate::scalar::{binomial, frac, inv_factorial, q, Q};
use crate::tensor::{TensorSum, Word};
use crate::vector::{Graded, Vector};

/// A noncommutative polynomial: words over generator indices.
pub type Poly = Vector<Vec<u8>>;

/// A Hall basis element, ordered by weight then by its word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HallWord {
    pub weight: usize,
    pub word: Vec<u8>,
    pub repr: String,
}

impl fmt::Debug for HallWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.repr)
    }
}

pub type LieElement = Vector<HallWord>;

#[derive(Clone, Debug)]
enum Bracket {
    Gen(u8),
    Br(Box<Bracket>, Box<Bracket>),
}

/// Fully reduced row echelon form over words, remembering how each row is
/// built from the inserted vectors.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(Vec<u8>, Poly, Vector<usize>)>,
}

impl Echelon {
    fn reduce(&self, p: &Poly) -> (Poly, Vector<usize>) {
        let mut r = p.clone();
        let mut combo = Vector::zero();
        for (pivot, row, c) in &self.rows {
            let x = r.coeff(pivot);
            if !x.is_zero() {
                r.add_scaled(row, &-x.clone());
                combo.add_scaled(c, &x);
            }
        }
        (r, combo)
    }

    /// Inserts `p` tagged `id`; returns false if it is dependent.
    fn insert(&mut self, p: &Poly, id: usize) -> bool {
        let (r, combo) = self.reduce(p);
        let Some(pivot) = r.support().last().cloned() else {
            return false;
        };
        let inv = Q::one() / r.coeff(&pivot);
        let row = r.scale(&inv);
        let mut c = Vector::term(id, Q::one()) - combo;
        c = c.scale(&inv);
        for (_, other, oc) in self.rows.iter_mut() {
            let x = other.coeff(&pivot);
            if !x.is_zero() {
                other.add_scaled(&row, &-x.clone());
                oc.add_scaled(&c, &-x);
            }
        }
        self.rows.push((pivot, row, c));
        true
    }

}

/// The free graded Lie algebra on named generators, truncated at weight `W`.
#[derive(Clone, Debug)]
pub struct FreeLie {
    names: Vec<String>,
    degrees: Vec<i64>,
    cap: usize,
    basis: Vec<HallWord>,
    images: Vec<Poly>,
    solvers: HashMap<Vec<usize>, Echelon>,
}

fn lyndon_words(n: u8, max_len: usize) -> Vec<Vec<u8>> {
    // Duval's algorithm.
    let mut out = Vec::new();
    if n == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == n - 1 {
                w.pop();
            } else {
                break;
            }
        }
        let Some(last) = w.last_mut() else { break };
        *last += 1;
    }
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

impl FreeLie {
    pub fn new(generators: &[(&str, i64)], cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::input("weight cap must be ≥ 1"));
        }
        if generators.is_empty() || generators.len() > 16 {
            return Err(Error::input("need between 1 and 16 generators"));
        }
        let names: Vec<String> = generators.iter().map(|(n, _)| n.to_string()).collect();
        let degrees: Vec<i64> = generators.iter().map(|&(_, d)| d).collect();
        let mut lie = FreeLie {
            names,
            degrees,
            cap,
            basis: Vec::new(),
            images: Vec::new(),
            solvers: HashMap::new(),
        };
        let mut entries: Vec<(HallWord, Bracket)> = Vec::new();
        let mut brackets: BTreeMap<Vec<u8>, Bracket> = BTreeMap::new();
        let mut words = lyndon_words(generators.len() as u8, cap);
        words.sort_by_key(|w| w.len());
        for w in words {
            let b = if w.len() == 1 {
                Bracket::Gen(w[0])
            } else {
                // Standard factorization: the longest proper Lyndon suffix.
                let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).unwrap();
                Bracket::Br(
                    Box::new(brackets[&w[..split].to_vec()].clone()),
                    Box::new(brackets[&w[split..].to_vec()].clone()),
                )
            };
            brackets.insert(w.clone(), b.clone());
            entries.push((lie.hall_word(&w, &b), b.clone()));
            if lie.word_degree(&w) % 2 != 0 && 2 * w.len() <= cap {
                let sq = Bracket::Br(Box::new(b.clone()), Box::new(b));
                let ww = [w.clone(), w].concat();
                entries.push((lie.hall_word(&ww, &sq), sq));
            }
        }
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        for (hw, b) in entries {
            let img = lie.expand(&b);
            let id = lie.basis.len();
            let key = lie.multidegree(&hw.word);
            let ok = lie.solvers.entry(key).or_default().insert(&img, id);
            if !ok {
                return Err(Error::internal(format!("Hall element {} is dependent", hw.repr)));
            }
            lie.basis.push(hw);
            lie.images.push(img);
        }
        Ok(lie)
    }

    fn hall_word(&self, w: &[u8], b: &Bracket) -> HallWord {
        HallWord {
            weight: w.len(),
            word: w.to_vec(),
            repr: self.render(b),
        }
    }

    fn render(&self, b: &Bracket) -> String {
        match b {
            Bracket::Gen(g) => self.names[*g as usize].clone(),
            Bracket::Br(x, y) => format!("[{},{}]", self.render(x), self.render(y)),
        }
    }

    fn expand(&self, b: &Bracket) -> Poly {
        match b {
            Bracket::Gen(g) => Vector::basis(vec![*g]),
            Bracket::Br(x, y) => self.bracket(&self.expand(x), &self.expand(y)),
        }
    }

    fn multidegree(&self, w: &[u8]) -> Vec<usize> {
        let mut m = vec![0; self.names.len()];
        for &c in w {
            m[c as usize] += 1;
        }
        m
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator(&self, name: &str) -> Result<u8> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as u8)
            .ok_or_else(|| Error::input(format!("unknown generator {name}")))
    }

    pub fn word_degree(&self, w: &[u8]) -> i64 {
        w.iter().map(|&c| self.degrees[c as usize]).sum()
    }

    /// Hall basis of weight `≤ W`, ordered by weight then word.
    pub fn hall_basis(&self) -> &[HallWord] {
        &self.basis
    }

    pub fn hall_degree(&self, h: &HallWord) -> i64 {
        self.word_degree(&h.word)
    }

    pub fn gen(&self, g: u8) -> Poly {
        Vector::basis(vec![g])
    }

    pub fn truncate(&self, p: &Poly) -> Poly {
        p.filter(|w| w.len() <= self.cap)
    }

    /// Graded commutator in the tensor algebra, truncated at weight `W`.
    pub fn bracket(&self, x: &Poly, y: &Poly) -> Poly {
        let mut out = Vector::zero();
        for (u, a) in x.iter() {
            for (v, b) in y.iter() {
                if u.len() + v.len() > self.cap {
                    continue;
                }
                let c = a * b;
                out.add_term([u.as_slice(), v].concat(), c.clone());
                let odd = self.word_degree(u) * self.word_degree(v) % 2 != 0;
                out.add_term([v.as_slice(), u].concat(), if odd { c } else { -c });
            }
        }
        out
    }

    pub fn ad_power(&self, x: &Poly, k: usize, y: &Poly) -> Poly {
        let mut r = y.clone();
        for _ in 0..k {
            r = self.bracket(x, &r);
        }
        r
    }

    /// Image of a Hall-basis combination in the tensor algebra.
    pub fn to_poly(&self, e: &LieElement) -> Poly {
        let mut out = Vector::zero();
        for (h, c) in e.iter() {
            let i = self.basis.binary_search(h).expect("Hall word from this algebra");
            out.add_scaled(&self.images[i], c);
        }
        out
    }

    /// Hall-basis coordinates; fails if `p` is not a Lie element.
    pub fn normal_form(&self, p: &Poly) -> Result<LieElement> {
        let mut groups: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
        for (w, c) in self.truncate(p).iter() {
            groups.entry(self.multidegree(w)).or_default().add_term(w.clone(), c.clone());
        }
        let mut out = Vector::zero();
        for (key, part) in groups {
            let Some(solver) = self.solvers.get(&key) else {
                return Err(Error::input("polynomial is not a Lie element"));
            };
            let (rest, combo) = solver.reduce(&part);
            if !rest.is_zero() {
                return Err(Error::input("polynomial is not a Lie element"));
            }
            for (i, c) in combo.iter() {
                out.add_term(self.basis[*i].clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// The derivation extending `d` on generators, truncated at weight `W`.
    /// `d` has odd degree.
    pub fn derivation(&self, d: &[Poly], p: &Poly) -> Poly {
        let mut out = Vector::zero();
        for (w, c) in p.iter() {
            let mut passed = 0i64;
            for i in 0..w.len() {
                let c = if passed % 2 != 0 { -c.clone() } else { c.clone() };
                for (dw, x) in d[w[i] as usize].iter() {
                    if w.len() - 1 + dw.len() > self.cap {
                        continue;
                    }
                    let mut nw = w[..i].to_vec();
                    nw.extend_from_slice(dw);
                    nw.extend_from_slice(&w[i + 1..]);
                    out.add_term(nw, &c * x);
                }
                passed += self.degrees[w[i] as usize];
            }
        }
        out
    }

    /// Rank of the span of all bracketings of generators, per weight; an
    /// oracle for the size of the Hall basis.
    pub fn bracketing_rank(&self, weight: usize) -> usize {
        let mut levels: Vec<Vec<Poly>> = vec![Vec::new()];
        levels.push((0..self.names.len() as u8).map(|g| self.gen(g)).collect());
        for n in 2..=weight {
            let mut e = Echelon::default();
            let mut kept = Vec::new();
            for i in 1..n {
                for x in &levels[i] {
                    for y in &levels[n - i] {
                        let b = self.bracket(x, y);
                        if e.insert(&b, kept.len()) {
                            kept.push(b);
                        }
                    }
                }
            }
            levels.push(kept);
        }
        levels[weight].len()
    }
}

/// Generators in Lyndon order `z < a < b`.
pub const Z: u8 = 0;
pub const A: u8 = 1;
pub const B: u8 = 2;

/// The free graded Lie algebra on `a, b` (degree −1) and `z` (degree 0).
pub fn ls_algebra(w: usize) -> Result<FreeLie> {
    FreeLie::new(&[("z", 0), ("a", -1), ("b", -1)], w)
}

/// Hall basis of the Lawrence–Sullivan generators up to weight `W`.
pub fn hall_basis(w: usize) -> Result<Vec<HallWord>> {
    Ok(ls_algebra(w)?.hall_basis().to_vec())
}

/// `d` on the three generators as tensor-algebra polynomials.
pub fn ls_generator_images(lie: &FreeLie) -> [Poly; 3] {
    let half = frac(-1, 2);
    let a = lie.gen(A);
    let b = lie.gen(B);
    let z = lie.gen(Z);
    let da = lie.bracket(&a, &a).scale(&half);
    let db = lie.bracket(&b, &b).scale(&half);
    let y = b - a;
    let mut dz = lie.bracket(&z, &lie.gen(B));
    let bern = bernoulli_table(lie.cap());
    for (k, bk) in bern.iter().enumerate().take(lie.cap()) {
        if bk.is_zero() {
            continue;
        }
        let c = bk * inv_factorial(k);
        dz.add_scaled(&lie.ad_power(&z, k, &y), &c);
    }
    [dz, da, db]
}

fn parse_generator(g: &str) -> Result<u8> {
    match g {
        "a" => Ok(A),
        "b" => Ok(B),
        "z" => Ok(Z),
        _ => Err(Error::input(format!("unknown generator {g}; expected a, b or z"))),
    }
}

/// `d(g)` truncated to weight `≤ W`, in Hall normal form.
pub fn ls_differential(g: &str, w: usize) -> Result<LieElement> {
    let lie = ls_algebra(w)?;
    let d = ls_generator_images(&lie);
    lie.normal_form(&d[parse_generator(g)? as usize])
}

/// `d(d(g))` truncated to weight `≤ W`, in Hall normal form.
pub fn d_square_defect(g: &str, w: usize) -> Result<LieElement> {
    let lie = ls_algebra(w)?;
    let d = ls_generator_images(&lie);
    let dd = lie.derivation(&d, &d[parse_generator(g)? as usize]);
    lie.normal_form(&dd)
}

/// Symbols of the universal-envelope expansion of `dz`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UeSymbol {
    Z,
    /// `b − a`.
    Y,
    B,
}

impl fmt::Debug for UeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UeSymbol::Z => "z",
            UeSymbol::Y => "(b-a)",
            UeSymbol::B => "b",
        })
    }
}

/// `dz = zb − bz + Σ_{k≤W} (B_k/k!) Σ_j (−1)^j C(k,j) z^{k−j} (b−a) z^j`
/// as noncommutative words; `W` bounds the power of `ad_z`.
pub fn ue_expand_dz(w: usize) -> Result<TensorSum<UeSymbol>> {
    use UeSymbol::*;
    if w == 0 {
        return Err(Error::input("truncation must be ≥ 1"));
    }
    let mut out: TensorSum<UeSymbol> = Vector::from_terms([
        (Word::new(vec![Z, B])?, q(1)),
        (Word::new(vec![B, Z])?, q(-1)),
    ]);
    let bern = bernoulli_table(w);
    for (k, bk) in bern.iter().enumerate() {
        for j in 0..=k {
            let mut f = vec![Z; k - j];
            f.push(Y);
            f.extend(std::iter::repeat_n(Z, j));
            let sign = if j % 2 == 1 { q(-1) } else { q(1) };
            let c = bk * inv_factorial(k) * Q::from_integer(binomial(k, j)) * sign;
            out.add_term(Word::new(f)?, c);
        }
    }
    Ok(out)
}

/// Basis of the A∞-coalgebra on `⟨u, v, w⟩`: `|u| = |v| = 0`, `|w| = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Uvw {
    U,
    V,
    W,
}

impl Graded for Uvw {
    fn degree(&self) -> i64 {
        match self {
            Uvw::W => 1,
            _ => 0,
        }
    }
}

impl fmt::Debug for Uvw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Uvw::U => "u",
            Uvw::V => "v",
            Uvw::W => "w",
        })
    }
}

impl Uvw {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(Uvw::U),
            "v" => Ok(Uvw::V),
            "w" => Ok(Uvw::W),
            _ => Err(Error::input(format!("unknown symbol {s}"))),
        }
    }
}

/// The structure with `δ_1(w) = u − v`, the quadratic terms
/// `δ_2(w) = −½ w⊗(u+v) − ½ (u+v)⊗w`, `δ_2(u) = −u⊗u`, `δ_2(v) = −v⊗v`, and
/// `δ_k(w) = −Σ_{p+q=k−1} b_{k−1}/(p!q!) w^{⊗p}⊗(u−v)⊗w^{⊗q}` for `k ≥ 3`
/// with `b_m = |B_m|`.
pub fn uvw_coalgebra(max_arity: usize) -> Result<FiniteCoalgebra<Uvw>> {
    uvw_with(max_arity, crate::scalar::abs)
}

/// Same shape with `b_m = B_m` taken with its sign. This reading is not
/// coherent from arity 5 on.
pub fn uvw_coalgebra_signed(max_arity: usize) -> Result<FiniteCoalgebra<Uvw>> {
    uvw_with(max_arity, |b| b.clone())
}

fn uvw_with(max_arity: usize, coeff: impl Fn(&Q) -> Q) -> Result<FiniteCoalgebra<Uvw>> {
    use Uvw::*;
    if max_arity == 0 {
        return Err(Error::input("max arity must be ≥ 1"));
    }
    let word = |f: Vec<Uvw>| Word::new(f).unwrap();
    let mut c = FiniteCoalgebra::new(vec![U, V, W], max_arity);
    c.set(1, W, Vector::from_terms([(word(vec![U]), q(1)), (word(vec![V]), q(-1))]))?;
    if max_arity >= 2 {
        let h = frac(-1, 2);
        c.set(
            2,
            W,
            Vector::from_terms([
                (word(vec![W, U]), h.clone()),
                (word(vec![W, V]), h.clone()),
                (word(vec![U, W]), h.clone()),
                (word(vec![V, W]), h),
            ]),
        )?;
        c.set(2, U, Vector::term(word(vec![U, U]), q(-1)))?;
        c.set(2, V, Vector::term(word(vec![V, V]), q(-1)))?;
    }
    let bern = bernoulli_table(max_arity);
    for k in 3..=max_arity {
        let mut v = Vector::zero();
        for p in 0..k {
            let qq = k - 1 - p;
            let coef = -coeff(&bern[k - 1]) * inv_factorial(p) * inv_factorial(qq);
            for (mid, s) in [(U, q(1)), (V, q(-1))] {
                let mut f = vec![W; p];
                f.push(mid);
                f.extend(std::iter::repeat_n(W, qq));
                v.add_term(word(f), &coef * &s);
            }
        }
        c.set(k, W, v)?;
    }
    Ok(c)
}

/// The relabelling `𝟎 ↦ −u`, `𝟏 ↦ −v`, `𝟎𝟏 ↦ w` under which the transferred
/// structure on the cells coincides with [`uvw_coalgebra`].
pub fn cell_dictionary() -> SignDictionary<Cell, Uvw> {
    SignDictionary::new([
        (Cell::Zero, Uvw::U, true),
        (Cell::One, Uvw::V, true),
        (Cell::ZeroOne, Uvw::W, false),
    ])
}

/// Outcome of [`cylinder_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderReport {
    pub mc_alpha0: Element,
    pub mc_alpha1: Element,
    /// `dξ − ℓ_2(ξ, α₁) − Σ_{k≤cap} (B_k/k!) ad_ξ^k(α₁ − α₀)`.
    pub relation: Element,
}

impl CylinderReport {
    pub fn passed(&self) -> bool {
        self.mc_alpha0.is_zero() && self.mc_alpha1.is_zero() && self.relation.is_zero()
    }
}

/// Whether `(a, b, z) ↦ (α₀, α₁, ξ)` respects the differential of the
/// cylinder Lie algebra, i.e. extends to a strict dg Lie map into `L`.
/// `L` should be a dg Lie algebra in which `ad_ξ` is nilpotent within `cap`.
pub fn cylinder_check<L: LInf>(l: &L, alpha0: &Element, alpha1: &Element, xi: &Element, cap: usize) -> Result<CylinderReport> {
    require_degree(l, alpha0, -1, "α₀")?;
    require_degree(l, alpha1, -1, "α₁")?;
    require_degree(l, xi, 0, "ξ")?;
    let mc_alpha0 = mc_defect(l, alpha0, l.arity_cap())?;
    let mc_alpha1 = mc_defect(l, alpha1, l.arity_cap())?;
    let mut relation = bracket_elems(l, &[xi]) - bracket_elems(l, &[xi, alpha1]);
    let bern = bernoulli_table(cap);
    let mut ad = alpha1 - alpha0;
    for (k, b) in bern.iter().enumerate() {
        if ad.is_zero() {
            break;
        }
        relation.add_scaled(&ad, &-(b * inv_factorial(k)));
        ad = bracket_elems(l, &[xi, &ad]);
    }
    Ok(CylinderReport {
        mc_alpha0,
        mc_alpha1,
        relation,
    })
}
