//! The nine end-to-end acceptance checks, shared by the test suite and the
//! `all-acceptance` command.

use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainf::{coherence_failures, stabilized_transfer, AInfCoalgebra, FiniteCoalgebra};
use crate::combinatorics::{bernoulli, binomial_identity_check};
use crate::error::{Error, Result};
use crate::interval::{dual_basis_upto, decorate, one_insertion_pattern, Cell};
use crate::lawrence_sullivan::{
    cell_dictionary, d_square_defect, ls_algebra, ls_differential, ue_expand_dz, uvw_coalgebra, UeSymbol, Uvw,
};
use crate::linf::conv::{
    concordance_defect_pair, conv_linf, identity_morphism, lxy_build, random_omega_map, ConcordanceCaps, OmegaMap,
};
use crate::linf::curves::{gauge_flow, omega_mc_check, quillen_from_gauge, Form, TruncPoly};
use crate::linf::samples::*;
use crate::linf::{jacobi_defect, mc_defect, Element, LInf, TableLInf, Twisted};
use crate::retract::{convergence_check, omega_embed, retract_defect, theta, Probe};
use crate::scalar::{abs, frac, inv_factorial, q, Q};
use crate::tensor::Word;
use crate::vector::Vector;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}] {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const TITLES: [&str; 9] = [
    "retract identities",
    "Bernoulli transfer",
    "stabilization",
    "coherence",
    "Lawrence-Sullivan algebra",
    "gauge flow and Quillen homotopy",
    "concordance defects",
    "decoration combinatorics",
    "convolution L-infinity algebras",
];

/// Runs criterion `id` (1–9).
pub fn run(id: u8) -> Result<Criterion> {
    let f: fn() -> Result<String> = match id {
        1 => retracts,
        2 => bernoulli_transfer,
        3 => stabilization,
        4 => coherence,
        5 => lawrence_sullivan,
        6 => gauge_quillen,
        7 => concordance,
        8 => decoration,
        9 => convolution,
        _ => return Err(Error::input(format!("no criterion {id}; expected 1 to 9"))),
    };
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    Ok(Criterion {
        id,
        title: TITLES[id as usize - 1],
        passed,
        detail,
        elapsed,
    })
}

pub fn run_all() -> Vec<Criterion> {
    (1..=9).map(|i| run(i).expect("ids 1..=9 exist")).collect()
}

fn fail(msg: impl Into<String>) -> Error {
    Error::check(msg.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

fn retracts() -> Result<String> {
    let mut checked = 0;
    for n in 2..=12u32 {
        for x in dual_basis_upto(2 * n) {
            let d = retract_defect(n, &x)?;
            ensure(d.is_zero(), || format!("dK + Kd ≠ id − ωθ at N = {n} on {x:?}: {d:?}"))?;
            for s in 1..=3 {
                ensure(convergence_check(n, s, Probe::Dual(x))?, || {
                    format!("K_{n} − K_{} leaves level {n} on {x:?}", n + s)
                })?;
            }
            checked += 1;
        }
        for c in [Cell::Zero, Cell::One, Cell::ZeroOne] {
            let v = Vector::basis(c);
            ensure(theta(&omega_embed(&v, n)?) == v, || format!("θω_{n} ≠ id on {c:?}"))?;
            for s in 1..=3 {
                ensure(convergence_check(n, s, Probe::Cell(c))?, || {
                    format!("ω_{n} − ω_{} leaves level {n} on {c:?}", n + s)
                })?;
            }
        }
    }
    Ok(format!("N = 2..12, {checked} dual basis elements, s = 1..3"))
}

/// The arity-6 transfer is shared by criteria 2–4.
fn transfer6() -> Result<&'static FiniteCoalgebra<Cell>> {
    static CELL: OnceLock<std::result::Result<FiniteCoalgebra<Cell>, String>> = OnceLock::new();
    CELL.get_or_init(|| stabilized_transfer(6).map(|r| r.0).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| fail(e.clone()))
}

fn word(cells: Vec<Cell>) -> Word<Cell> {
    Word::new(cells).unwrap()
}

fn bernoulli_transfer() -> Result<String> {
    use Cell::*;
    let t = transfer6()?;
    let d1 = t.delta(1, &ZeroOne)?;
    let one_minus_zero = Vector::from_terms([(word(vec![One]), q(1)), (word(vec![Zero]), q(-1))]);
    ensure(d1 == one_minus_zero || d1 == -one_minus_zero.clone(), || format!("δ_1(01) = {d1:?}"))?;
    let d2 = t.delta(2, &ZeroOne)?;
    let c = |w: Vec<Cell>| d2.coeff(&word(w));
    ensure(
        d2.len() == 4
            && abs(&c(vec![ZeroOne, Zero])) == frac(1, 2)
            && c(vec![ZeroOne, Zero]) == c(vec![ZeroOne, One])
            && c(vec![Zero, ZeroOne]) == c(vec![One, ZeroOne])
            && abs(&c(vec![Zero, ZeroOne])) == frac(1, 2),
        || format!("δ_2(01) = {d2:?} is not ±½ 01⊗(0+1) ± ½ (0+1)⊗01"),
    )?;
    for x in [Zero, One] {
        let d = t.delta(2, &x)?;
        ensure(d.len() == 1 && abs(&d.coeff(&word(vec![x, x]))) == q(1), || format!("δ_2({x:?}) = {d:?}"))?;
    }
    for k in 3..=6 {
        for x in [Zero, One] {
            ensure(t.delta(k, &x)?.is_zero(), || format!("δ_{k}({x:?}) ≠ 0"))?;
        }
        let d = t.delta(k, &ZeroOne)?;
        let b = abs(&bernoulli(k - 1));
        let mut expected_terms = 0;
        for p in 0..k {
            let qq = k - 1 - p;
            let want = &b * inv_factorial(p) * inv_factorial(qq);
            for mid in [Zero, One] {
                let mut f = vec![ZeroOne; p];
                f.push(mid);
                f.extend(std::iter::repeat_n(ZeroOne, qq));
                let got = abs(&d.coeff(&word(f)));
                ensure(got == want, || format!("δ_{k}(01): |coefficient| {got} at p = {p}, expected {want}"))?;
                expected_terms += !want.is_zero() as usize;
            }
        }
        ensure(d.len() == expected_terms, || format!("δ_{k}(01) has unexpected words: {d:?}"))?;
    }
    for k in [4, 6] {
        ensure(t.delta(k, &ZeroOne)?.is_zero(), || format!("δ_{k}(01) ≠ 0"))?;
    }
    let relabeled = t.relabel(&cell_dictionary())?;
    ensure(relabeled == uvw_coalgebra(6)?, || "signed comparison with the uvw structure fails".into())?;
    Ok("arities 1..6 match |B_{k−1}|/(p!q!); signed match under 0 ↦ −u, 1 ↦ −v, 01 ↦ w".into())
}

fn stabilization() -> Result<String> {
    let full = transfer6()?;
    for k in 1..=6 {
        let (t, report) = stabilized_transfer(k)?;
        ensure(report.agree, || format!("levels {:?} disagree at arity {k}", report.levels))?;
        ensure(t == full.truncate(k), || format!("arity ≤ {k} differs between levels {:?} and 7..10", report.levels))?;
    }
    Ok("δ_k identical on N = k+1..k+4 for every k ≤ 6".into())
}

fn coherence() -> Result<String> {
    let t = transfer6()?;
    let cells = [Cell::Zero, Cell::One, Cell::ZeroOne];
    let bad = coherence_failures(t, &cells, 6)?;
    ensure(bad.is_empty(), || format!("transferred structure: {} failures, first at arity {}", bad.len(), bad[0].0))?;
    let u = uvw_coalgebra(6)?;
    let bad = coherence_failures(&u, &[Uvw::U, Uvw::V, Uvw::W], 6)?;
    ensure(bad.is_empty(), || format!("uvw structure: {} failures, first at arity {}", bad.len(), bad[0].0))?;
    Ok("both structures coherent through arity 6".into())
}

fn lawrence_sullivan() -> Result<String> {
    let w = 6;
    for g in ["a", "b", "z"] {
        let d = d_square_defect(g, w)?;
        ensure(d.is_zero(), || format!("d²{g} ≠ 0 at weight ≤ {w}: {d:?}"))?;
    }
    let lie = ls_algebra(w)?;
    for (g, i) in [("a", 1u8), ("b", 2u8)] {
        let x = lie.gen(i);
        let half_bracket = lie.normal_form(&lie.bracket(&x, &x))?.scale(&frac(1, 2));
        let d = ls_differential(g, w)?;
        ensure((d.clone() + half_bracket).is_zero(), || format!("d{g} + ½[{g},{g}] ≠ 0"))?;
    }
    let e = ue_expand_dz(5)?;
    let u = uvw_coalgebra(6)?;
    for k in 0..=5 {
        let delta = u.delta(k + 1, &Uvw::W)?;
        for p in 0..=k {
            let qq = k - p;
            let mut sym = vec![UeSymbol::Z; p];
            sym.push(UeSymbol::Y);
            sym.extend(std::iter::repeat_n(UeSymbol::Z, qq));
            let mut cells = vec![Uvw::W; p];
            cells.push(Uvw::U);
            cells.extend(std::iter::repeat_n(Uvw::W, qq));
            let a = abs(&e.coeff(&Word::new(sym)?));
            let b = abs(&delta.coeff(&Word::new(cells)?));
            ensure(a == b, || format!("weight {}: |{a}| vs |{b}| at p = {p}", k + 1))?;
        }
    }
    Ok(format!("d² = 0 on a, b, z and da + ½[a,a] = 0 at weight ≤ {w}; dz expansion matches δ_{{k+1}}(w) for k ≤ 5"))
}

fn gauge_quillen() -> Result<String> {
    let t = 6;
    let mut cases: Vec<(String, TableLInf, Element, Element, Element)> = Vec::new();
    let l = nilpotent();
    let (a, x) = (l.elem(&[("a", q(1))])?, l.elem(&[("x", q(1))])?);
    cases.push(("nilpotent".into(), l.clone(), a, x, l.elem(&[("a", q(1)), ("b", q(1))])?));
    let l = nilpotent3();
    let (a, x) = (l.elem(&[("a", q(1))])?, l.elem(&[("x", q(1))])?);
    let end = l.elem(&[("a", q(1)), ("b", q(1)), ("c", frac(1, 2))])?;
    cases.push(("three-step".into(), l.clone(), a, x, end));
    let l = x0_a();
    let (a, x) = (l.elem(&[("a", q(1))])?, l.elem(&[("x0", q(1))])?);
    let e: Q = (0..=t).map(inv_factorial).sum();
    cases.push(("x0/a".into(), l.clone(), a, x, l.elem(&[("a", e)])?));
    let l = dg_lie();
    let y = l.elem(&[("y", q(1))])?;
    cases.push(("dg Lie".into(), l.clone(), Vector::zero(), y, Vector::zero()));
    for (name, l, a0, x, end) in &cases {
        let curve = gauge_flow(l, a0, x, t)?;
        let p = TruncPoly::new(l, t);
        let mc = mc_defect(&p, &p.from_curve(&curve), l.arity_cap())?;
        ensure(mc.is_zero(), || format!("{name}: flow is not MC mod t^{}", t + 1))?;
        ensure(curve.at_zero() == *a0, || format!("{name}: wrong value at t = 0"))?;
        ensure(curve.at_one() == *end, || format!("{name}: wrong value at t = 1: {:?}", curve.at_one()))?;
        let beta = quillen_from_gauge(l, a0, x, t)?;
        let (free, dt) = omega_mc_check(l, &beta, l.arity_cap(), t)?;
        ensure(free.is_zero() && dt.is_zero(), || format!("{name}: Quillen components nonzero"))?;
    }
    Ok(format!("{} sample algebras, T = {t}", cases.len()))
}

fn concordance() -> Result<String> {
    let caps = ConcordanceCaps { arity: 4, word: 4, t: 4 };
    let algebras = [dual_numbers(0), dual_numbers(-1), dual_numbers(1)];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 120;
    let mut nonzero = 0;
    for trial in 0..trials {
        let x = &algebras[trial % 3];
        let y = &algebras[(trial / 3) % 3];
        let phi = random_omega_map(x, y, caps, 6, &mut rng);
        let (d1, d2) = concordance_defect_pair(x, y, &phi, caps)?;
        ensure(d1 == d2, || format!("trial {trial}: defects differ"))?;
        nonzero += !d1.is_zero() as usize;
    }
    for a in &algebras {
        let mut phi = OmegaMap::new();
        for i in 0..a.dim() {
            phi.insert(vec![i], Vector::basis((i, Form::T(0))));
        }
        let (d1, d2) = concordance_defect_pair(a, a, &phi, caps)?;
        ensure(d1.is_zero() && d2.is_zero(), || "strict identity has nonzero defects".into())?;
    }
    Ok(format!("{trials} random maps agree ({nonzero} with nonzero defect); identity gives (0, 0)"))
}

fn decoration() -> Result<String> {
    for n in 1..=6 {
        let pattern = one_insertion_pattern(n)?;
        for level in n as u32 + 1..=n as u32 + 3 {
            ensure(decorate(Cell::ZeroOne, n, level)? == pattern, || format!("01 at n = {n}, N = {level}"))?;
            for c in [Cell::Zero, Cell::One] {
                let want = Vector::basis(word(vec![c; n]));
                ensure(decorate(c, n, level)? == want, || format!("{c:?} at n = {n}, N = {level}"))?;
            }
        }
    }
    for n in 1..=12 {
        ensure(binomial_identity_check(n), || format!("binomial identity fails at n = {n}"))?;
    }
    Ok("n ≤ 6 on three levels each; binomial identity for n ≤ 12".into())
}

fn random_basis_tuples<R: Rng>(dim: usize, n: usize, draws: usize, rng: &mut R) -> Vec<Vec<usize>> {
    (0..draws)
        .map(|_| {
            let len = rng.gen_range(1..=n);
            (0..len).map(|_| rng.gen_range(0..dim)).collect()
        })
        .collect()
}

fn jacobi_on<L: LInf>(l: &L, tuples: &[Vec<usize>], what: &str) -> Result<()> {
    for t in tuples {
        let d = jacobi_defect(l, t)?;
        ensure(d.is_zero(), || format!("{what}: Jacobi fails on {t:?}"))?;
    }
    Ok(())
}

fn l1_squares_to_zero<L: LInf>(l: &L, what: &str) -> Result<()> {
    for i in 0..l.dim() {
        let dd = l.bracket(1, &[i]).map_linear(|&j| l.bracket(1, &[j]));
        ensure(dd.is_zero(), || format!("{what}: ℓ_1² ≠ 0 on {}", l.name(i)))?;
    }
    Ok(())
}

fn convolution() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let draws = 100;
    let c = uvw_coalgebra(4)?;
    let mut algebras = 0;
    for (name, a) in [("k[ε]", dual_numbers(0)), ("dga", small_dga()), ("k[x]/x³", truncated_poly(1, 3))] {
        let l = conv_linf(&c, &a)?;
        jacobi_on(&l, &random_basis_tuples(l.dim(), 4, draws, &mut rng), &format!("Hom(C, {name})"))?;
        algebras += 1;
    }
    for (name, x, y) in [
        ("k[ε]", dual_numbers(0), dual_numbers(0)),
        ("k[x]/x³", truncated_poly(1, 3), truncated_poly(1, 3)),
        ("ternary", ternary_algebra(), ternary_algebra()),
    ] {
        let l = lxy_build(&x, &y, 4, 4)?;
        jacobi_on(&l, &l.random_tuples(4, draws, &mut rng), &format!("L({name}, {name})"))?;
        algebras += 1;
    }
    let a = dual_numbers(0);
    let l = conv_linf(&c, &a)?;
    let w = 2;
    let alpha = Vector::from_terms([(l.index(w, 0), q(1)), (l.index(w, 1), frac(-1, 2))]);
    let tw = Twisted::new(&l, &alpha)?;
    jacobi_on(&tw, &random_basis_tuples(l.dim(), 4, draws, &mut rng), "twisted Hom(C, k[ε])")?;
    l1_squares_to_zero(&tw, "twisted Hom(C, k[ε])")?;
    let l = lxy_build(&a, &a, 3, 3)?;
    let id = identity_morphism(&l)?;
    let tw = Twisted::new(&l, &id)?;
    jacobi_on(&tw, &l.random_tuples(4, draws, &mut rng), "L(k[ε], k[ε]) twisted by id")?;
    l1_squares_to_zero(&tw, "L(k[ε], k[ε]) twisted by id")?;
    Ok(format!("{algebras} algebras × {draws} random tuples up to arity 4; 2 twists by MC elements"))
}
