use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conv::*;
use super::curves::*;
use super::samples::*;
use super::*;
use crate::ainf::FiniteCoalgebra;
use crate::lawrence_sullivan::{uvw_coalgebra, Uvw};
use crate::scalar::{frac, q};

fn jacobi_failures<L: LInf>(l: &L, max: usize) -> Vec<Vec<usize>> {
    let mut bad = Vec::new();
    for t in words_upto(l.dim(), max) {
        if !jacobi_defect(l, &t).unwrap().is_zero() {
            bad.push(t);
        }
    }
    bad
}

fn l1_square_failures<L: LInf>(l: &L) -> usize {
    (0..l.dim())
        .filter(|&i| {
            let d = l.bracket(1, &[i]);
            !d.map_linear(|&j| l.bracket(1, &[j])).is_zero()
        })
        .count()
}

fn lxy_tuples(l: &Lxy, n: usize, draws: usize, seed: u64) -> Vec<Vec<usize>> {
    l.random_tuples(n, draws, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn nonassociative() -> AInfAlgebra {
    let mut a = AInfAlgebra::new(&[("x", 0), ("y", 0)], 2).unwrap();
    a.set_named(&["x", "x"], &[("y", q(1))]).unwrap();
    a.set_named(&["y", "x"], &[("y", q(1))]).unwrap();
    a
}

#[test]
fn sample_tables_satisfy_jacobi() {
    for l in [mc_example(), x0_a(), nilpotent(), ternary(), dg_lie()] {
        assert!(jacobi_failures(&l, 4).is_empty());
        assert!(l.filtration_ok());
    }
}

#[test]
fn broken_leibniz_is_detected() {
    let mut l = TableLInf::new(&[("y", 0, 1), ("a", -1, 1), ("b", -1, 2), ("c", -2, 1), ("e", -2, 2)], 2).unwrap();
    l.set_named(&["a"], &[("c", q(1))]).unwrap();
    l.set_named(&["y", "a"], &[("b", q(1))]).unwrap();
    l.set_named(&["y", "c"], &[("e", q(1))]).unwrap();
    l.set_named(&["b"], &[("e", q(-1))]).unwrap();
    assert!(!jacobi_failures(&l, 2).is_empty());
}

#[test]
fn table_validation() {
    let mut l = TableLInf::new(&[("x", 0, 1), ("a", -1, 1), ("c", -2, 2)], 2).unwrap();
    assert!(l.set_named(&["a"], &[("a", q(1))]).is_err());
    assert!(l.set_named(&["x", "x"], &[("x", q(1))]).is_err());
    assert!(l.set_named(&["a", "c"], &[("c", q(1))]).is_err());
    assert!(l.set_named(&["x", "a"], &[("a", q(1))]).is_err());
    l.set_named(&["a", "a"], &[("c", q(1))]).unwrap();
    assert!(l.set_named(&["a", "a"], &[("c", q(2))]).is_err());
    // ℓ_2(x, c) = −ℓ_2(c, x) for |x| even.
    let mut m = TableLInf::new(&[("x", 0, 1), ("c", -2, 1), ("d", -2, 2)], 2).unwrap();
    m.set_named(&["x", "c"], &[("d", q(1))]).unwrap();
    let (x, c, d) = (m.index("x").unwrap(), m.index("c").unwrap(), m.index("d").unwrap());
    assert_eq!(m.bracket(2, &[c, x]), Vector::term(d, q(-1)));
}

#[test]
fn table_from_json() {
    let text = r#"{
        "basis": [{"name": "a", "degree": -1}, {"name": "c", "degree": -2, "weight": 2}],
        "differential": [{"input": "a", "output": {"c": "1"}}],
        "brackets": {"2": [{"inputs": ["a", "a"], "output": {"c": "1"}}]}
    }"#;
    assert_eq!(TableLInf::from_json(text).unwrap(), mc_example());
    assert!(TableLInf::from_json(r#"{"basis": [], "extra": 1}"#).is_err());
}

#[test]
fn mc_examples() {
    let l = mc_example();
    let alpha = l.elem(&[("a", q(-2))]).unwrap();
    assert!(mc_defect(&l, &alpha, 2).unwrap().is_zero());
    let a = l.elem(&[("a", q(1))]).unwrap();
    assert_eq!(mc_defect(&l, &a, 2).unwrap(), l.elem(&[("c", frac(3, 2))]).unwrap());
    assert!(Twisted::new(&l, &a).is_err());
    let t = ternary();
    let beta = t.elem(&[("a", q(1)), ("b", frac(-1, 6))]).unwrap();
    assert!(mc_defect(&t, &beta, 3).unwrap().is_zero());
}

#[test]
fn twisting_by_mc_elements() {
    let l = mc_example();
    let alpha = l.elem(&[("a", q(-2))]).unwrap();
    let tw = Twisted::new(&l, &alpha).unwrap();
    assert_eq!(tw.bracket(1, &[0]), l.elem(&[("c", q(-1))]).unwrap());
    assert!(jacobi_failures(&tw, 4).is_empty());
    assert_eq!(l1_square_failures(&tw), 0);
    let t = ternary();
    let beta = t.elem(&[("a", q(1)), ("b", frac(-1, 6))]).unwrap();
    let tw = Twisted::new(&t, &beta).unwrap();
    assert!(jacobi_failures(&tw, 4).is_empty());
    assert_eq!(l1_square_failures(&tw), 0);
}

#[test]
fn gauge_flow_nilpotent() {
    let l = nilpotent();
    let a = l.elem(&[("a", q(1))]).unwrap();
    let x = l.elem(&[("x", q(1))]).unwrap();
    let curve = gauge_flow(&l, &a, &x, 6).unwrap();
    assert_eq!(curve.at_zero(), a);
    assert_eq!(curve.at_one(), l.elem(&[("a", q(1)), ("b", q(1))]).unwrap());
    let beta = quillen_from_gauge(&l, &a, &x, 6).unwrap();
    let (free, dt) = omega_mc_check(&l, &beta, 2, 6).unwrap();
    assert!(free.is_zero() && dt.is_zero());
}

#[test]
fn gauge_flow_exponential() {
    let l = x0_a();
    let a = l.elem(&[("a", q(1))]).unwrap();
    let x = l.elem(&[("x0", q(1))]).unwrap();
    let curve = gauge_flow(&l, &a, &x, 6).unwrap();
    for (j, c) in curve.coeffs.iter().enumerate() {
        assert_eq!(*c, a.scale(&crate::scalar::inv_factorial(j)));
    }
    let p = TruncPoly::new(&l, 6);
    assert!(mc_defect(&p, &p.from_curve(&curve), 2).unwrap().is_zero());
}

#[test]
fn gauge_flow_with_differential() {
    let l = dg_lie();
    let a = l.elem(&[("b", q(1))]).unwrap();
    // b is not closed: d b = e.
    assert!(gauge_flow(&l, &a, &l.elem(&[("y", q(1))]).unwrap(), 3).is_err());
    let y = l.elem(&[("y", q(1))]).unwrap();
    let zero = Vector::zero();
    let curve = gauge_flow(&l, &zero, &y, 6).unwrap();
    let p = TruncPoly::new(&l, 6);
    assert!(mc_defect(&p, &p.from_curve(&curve), 2).unwrap().is_zero());
    let beta = quillen_from_gauge(&l, &zero, &y, 6).unwrap();
    let (free, dt) = omega_mc_check(&l, &beta, 2, 6).unwrap();
    assert!(free.is_zero() && dt.is_zero());
}

#[test]
fn displayed_and_genuine_omega_equations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in [mc_example(), dg_lie(), ternary()] {
        let odd_idx: Vec<usize> = (0..l.dim()).filter(|&i| l.degree(i) == -1).collect();
        let even_idx: Vec<usize> = (0..l.dim()).filter(|&i| l.degree(i) == 0).collect();
        for _ in 0..10 {
            let t = 4;
            let mut rand_curve = |idx: &[usize]| PolyCurve {
                coeffs: (0..=t)
                    .map(|_| {
                        let mut v = Vector::zero();
                        for &i in idx {
                            v.add_term(i, q(rng.gen_range(-2..=2)));
                        }
                        v
                    })
                    .collect(),
            };
            let beta = OmegaExtension {
                beta_m1: rand_curve(&odd_idx),
                beta_0: rand_curve(&even_idx),
            };
            let cap = l.arity_cap();
            assert_eq!(omega_mc_check(&l, &beta, cap, t).unwrap(), omega_mc_genuine(&l, &beta, cap, t).unwrap());
        }
    }
}

#[test]
fn omega_algebra_is_linf() {
    let o = OmegaT::new(dg_lie(), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let t: Vec<usize> = (0..n).map(|_| rng.gen_range(0..o.dim())).collect();
        assert!(jacobi_defect(&o, &t).unwrap().is_zero(), "{t:?}");
    }
}

#[test]
fn algebra_samples_are_coherent() {
    for a in [dual_numbers(0), dual_numbers(1), dual_numbers(-1), ternary_algebra(), small_dga(), ground_field(), truncated_poly(1, 3)] {
        assert!(a.coherence_failures(4).is_empty());
    }
    assert!(!nonassociative().coherence_failures(3).is_empty());
}

#[test]
fn algebra_from_json() {
    let text = r#"{
        "basis": [{"name": "1", "degree": 0}, {"name": "e", "degree": 0}],
        "operations": {"2": [
            {"inputs": ["1", "1"], "output": {"1": "1"}},
            {"inputs": ["1", "e"], "output": {"e": "1"}},
            {"inputs": ["e", "1"], "output": {"e": "1"}}
        ]}
    }"#;
    assert_eq!(AInfAlgebra::from_json(text).unwrap(), dual_numbers(0));
    let bad = r#"{"basis": [{"name": "x", "degree": 0}], "operations": {"2": [{"inputs": ["x", "x"], "output": {"x": "1/0"}}]}}"#;
    assert!(AInfAlgebra::from_json(bad).is_err());
}

#[test]
fn convolution_jacobi() {
    let c = uvw_coalgebra(4).unwrap();
    for a in [dual_numbers(0), dual_numbers(1), small_dga(), truncated_poly(1, 3), truncated_poly(-1, 3)] {
        let l = conv_linf(&c, &a).unwrap();
        assert!(jacobi_failures(&l, 4).is_empty());
        assert_eq!(l1_square_failures(&l), 0);
    }
}

#[test]
fn convolution_needs_degree_dependent_sign() {
    let c = uvw_coalgebra(4).unwrap();
    let l = conv_linf_with(&c, &truncated_poly(1, 3), false).unwrap();
    assert!(!jacobi_failures(&l, 4).is_empty());
}

#[test]
fn convolution_rejects_higher_products() {
    let c = uvw_coalgebra(3).unwrap();
    assert!(conv_linf(&c, &ternary_algebra()).is_err());
}

#[test]
fn convolution_small_cases() {
    let basis = vec![Uvw::U, Uvw::V, Uvw::W];
    let trivial = FiniteCoalgebra::new(basis, 3);
    let l = conv_linf(&trivial, &dual_numbers(0)).unwrap();
    for t in words_upto(l.dim(), 3) {
        assert!(l.bracket(t.len(), &t).is_zero());
    }
    let c = uvw_coalgebra(3).unwrap();
    let l = conv_linf(&c, &ground_field()).unwrap();
    let idx = |x: Uvw| [Uvw::U, Uvw::V, Uvw::W].iter().position(|&y| y == x).unwrap();
    let (u, v, w) = (l.index(idx(Uvw::U), 0), l.index(idx(Uvw::V), 0), l.index(idx(Uvw::W), 0));
    assert!(l.bracket(1, &[w]).is_zero());
    let du = l.bracket(1, &[u]);
    assert_eq!(du.len(), 1);
    assert_eq!(du.support().next(), Some(&w));
    assert_eq!(l.bracket(1, &[v]), -du);
}

#[test]
fn convolution_twists() {
    let c = uvw_coalgebra(4).unwrap();
    let a = dual_numbers(0);
    let l = conv_linf(&c, &a).unwrap();
    let w = [Uvw::U, Uvw::V, Uvw::W].iter().position(|&y| y == Uvw::W).unwrap();
    let alpha = Vector::from_terms([(l.index(w, 0), q(1)), (l.index(w, 1), frac(-1, 2))]);
    let tw = Twisted::new(&l, &alpha).unwrap();
    assert!(jacobi_failures(&tw, 3).is_empty());
    assert_eq!(l1_square_failures(&tw), 0);
}

#[test]
fn lxy_jacobi() {
    for (x, y) in [
        (dual_numbers(0), dual_numbers(0)),
        (truncated_poly(1, 3), truncated_poly(1, 3)),
        (ternary_algebra(), ternary_algebra()),
        (dual_numbers(1), truncated_poly(1, 3)),
        (dual_numbers(-1), dual_numbers(0)),
    ] {
        let l = lxy_build(&x, &y, 4, 4).unwrap();
        for t in lxy_tuples(&l, 4, 150, 7) {
            assert!(jacobi_defect(&l, &t).unwrap().is_zero(), "{t:?}");
        }
    }
}

#[test]
fn lxy_detects_incoherent_inputs() {
    for (x, y) in [(nonassociative(), dual_numbers(0)), (dual_numbers(0), nonassociative())] {
        let l = lxy_build(&x, &y, 4, 4).unwrap();
        assert!(lxy_tuples(&l, 4, 300, 7).iter().any(|t| !jacobi_defect(&l, t).unwrap().is_zero()));
    }
}

#[test]
fn lxy_morphisms() {
    let a = dual_numbers(0);
    let l = lxy_build(&a, &a, 4, 4).unwrap();
    let id = identity_morphism(&l).unwrap();
    assert!(mc_defect(&l, &id, 4).unwrap().is_zero());
    // 1 ↦ 1, ε ↦ 1 is not multiplicative.
    let mut phi = std::collections::BTreeMap::new();
    phi.insert(vec![0], Vector::basis(0));
    phi.insert(vec![1], Vector::basis(0));
    let f = lxy_element(&l, &phi).unwrap();
    assert!(!mc_defect(&l, &f, 4).unwrap().is_zero());
    let zero_structure = AInfAlgebra::new(&[("p", 0), ("r", 1)], 2).unwrap();
    let l0 = lxy_build(&zero_structure, &zero_structure, 4, 4).unwrap();
    assert!(mc_defect(&l0, &Vector::zero(), 4).unwrap().is_zero());
    assert!(lxy_build(&a, &a, 0, 4).is_err());
}

#[test]
fn lxy_twist_by_identity() {
    let a = dual_numbers(0);
    let l = lxy_build(&a, &a, 3, 3).unwrap();
    let id = identity_morphism(&l).unwrap();
    let tw = Twisted::new(&l, &id).unwrap();
    assert_eq!(l1_square_failures(&tw), 0);
    for t in lxy_tuples(&l, 3, 100, 9) {
        assert!(jacobi_defect(&tw, &t).unwrap().is_zero(), "{t:?}");
    }
}

#[test]
fn omega_tensor_is_coherent() {
    for y in [dual_numbers(0), dual_numbers(1), dual_numbers(-1), small_dga()] {
        assert!(omega_tensor(&y, 3).unwrap().coherence_failures(3).is_empty());
    }
}

const CAPS: ConcordanceCaps = ConcordanceCaps { arity: 4, word: 4, t: 4 };

#[test]
fn concordance_defects_agree() {
    let algebras = [dual_numbers(0), dual_numbers(-1), dual_numbers(1)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for trial in 0..60 {
        let x = &algebras[trial % 3];
        let y = &algebras[(trial / 3) % 3];
        let phi = random_omega_map(x, y, CAPS, 6, &mut rng);
        let (d1, d2) = concordance_defect_pair(x, y, &phi, CAPS).unwrap();
        assert_eq!(d1, d2);
        nonzero += !d1.is_zero() as usize;
    }
    assert!(nonzero > 30);
}

#[test]
fn concordance_identification_sign_is_forced() {
    let algebras = [dual_numbers(0), dual_numbers(-1)];
    for abc in (0..8u8).filter(|&abc| abc != 5) {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let differs = (0..40).any(|trial| {
            let (x, y) = (&algebras[trial % 2], &algebras[(trial / 2) % 2]);
            let phi = random_omega_map(x, y, CAPS, 6, &mut rng);
            let (d1, d2) = concordance_defect_pair_with(x, y, &phi, CAPS, |sw, sy, f| {
                let dt = matches!(f, Form::TDt(_)) as i64;
                (dt * ((abc & 1) as i64 * sw + ((abc >> 1) & 1) as i64 * sy + (abc >> 2) as i64)).rem_euclid(2) == 1
            })
            .unwrap();
            d1 != d2
        });
        assert!(differs, "{abc}");
    }
}

#[test]
fn concordance_trivial_cases() {
    let a = dual_numbers(0);
    let mut phi = OmegaMap::new();
    for i in 0..2 {
        phi.insert(vec![i], Vector::basis((i, Form::T(0))));
    }
    let (d1, d2) = concordance_defect_pair(&a, &a, &phi, CAPS).unwrap();
    assert!(d1.is_zero() && d2.is_zero());
    let z = AInfAlgebra::new(&[("p", 0), ("r", -1)], 2).unwrap();
    let (d1, d2) = concordance_defect_pair(&z, &z, &OmegaMap::new(), CAPS).unwrap();
    assert!(d1.is_zero() && d2.is_zero());
    let mut bad = OmegaMap::new();
    bad.insert(vec![0, 0], Vector::basis((0, Form::T(0))));
    assert!(concordance_defect_pair(&a, &a, &bad, CAPS).is_err());
}
