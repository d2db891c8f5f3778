use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use interval_transfer::ainf::shift;
use interval_transfer::combinatorics::{bernoulli_table, binomial_identity_check};
use interval_transfer::interval::{decorate, dual_basis_upto, Cell, Dual};
use interval_transfer::lawrence_sullivan::ls_algebra;
use interval_transfer::linf::conv::{concordance_defect_pair, conv_linf, lxy_build, random_omega_map, ConcordanceCaps};
use interval_transfer::linf::samples::*;
use interval_transfer::linf::{jacobi_defect, mc_defect, LInf};
use interval_transfer::retract::{k_homotopy, retract_defect};
use interval_transfer::scalar::{self, binomial, frac, q, Q};
use interval_transfer::sign::{koszul_odd, perm_odd, permutations};
use interval_transfer::tensor::Word;
use interval_transfer::{Graded, Vector};

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| frac(n, d))
}

fn vector() -> impl Strategy<Value = Vector<u8>> {
    prop::collection::vec((0u8..6, rational()), 0..6).prop_map(Vector::from_terms)
}

proptest! {
    #[test]
    fn vector_addition_is_commutative(a in vector(), b in vector()) {
        prop_assert_eq!(a.clone() + b.clone(), b + a);
    }

    #[test]
    fn vector_subtraction_cancels(a in vector()) {
        prop_assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn scaling_distributes(a in vector(), b in vector(), c in rational()) {
        prop_assert_eq!((a.clone() + b.clone()).scale(&c), a.scale(&c) + b.scale(&c));
    }

    #[test]
    fn rationals_round_trip(x in rational()) {
        prop_assert_eq!(scalar::parse(&scalar::format(&x)).unwrap(), x);
    }

    #[test]
    fn koszul_sign_composes(degrees in prop::collection::vec(-3i64..3, 1..5), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = degrees.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s: Vec<usize> = (0..n).collect();
        let mut t = s.clone();
        s.shuffle(&mut rng);
        t.shuffle(&mut rng);
        // Rearranging by s, then by t, equals rearranging by s∘t.
        let after_s: Vec<i64> = s.iter().map(|&i| degrees[i]).collect();
        let st: Vec<usize> = t.iter().map(|&j| s[j]).collect();
        prop_assert_eq!(koszul_odd(&s, &degrees) ^ koszul_odd(&t, &after_s), koszul_odd(&st, &degrees));
    }

    #[test]
    fn even_degrees_give_trivial_koszul_sign(n in 1usize..5) {
        for p in permutations(n) {
            prop_assert!(!koszul_odd(&p, &vec![0; n]));
            prop_assert_eq!(koszul_odd(&p, &vec![1; n]), perm_odd(&p));
        }
    }

    #[test]
    fn shift_is_an_involution(cells in prop::collection::vec(0u8..3, 1..6), c in rational()) {
        let f: Vec<Cell> = cells.iter().map(|&i| [Cell::Zero, Cell::One, Cell::ZeroOne][i as usize]).collect();
        let v = Vector::term(Word::new(f).unwrap(), c);
        prop_assert_eq!(shift(&shift(&v)), v);
    }

    #[test]
    fn retract_identity_on_random_elements(n in 2u32..12, idx in 0u32..30, beta in any::<bool>()) {
        let x = if beta { Dual::Beta(idx) } else { Dual::Alpha(idx) };
        prop_assert!(retract_defect(n, &x).unwrap().is_zero());
        // K has degree +1 and K² = 0.
        let k = k_homotopy(&Vector::basis(x), n).unwrap();
        prop_assert!(k.support().all(|y| y.degree() == x.degree() + 1));
        prop_assert!(k_homotopy(&k, n).unwrap().is_zero());
    }

    #[test]
    fn decorations_are_stable_and_symmetric(n in 1usize..6, extra in 1u32..4) {
        let a = decorate(Cell::ZeroOne, n, n as u32 + 1).unwrap();
        let b = decorate(Cell::ZeroOne, n, n as u32 + extra).unwrap();
        prop_assert_eq!(&a, &b);
        // Exchanging 0 and 1 everywhere preserves the decoration.
        let swapped: Vector<Word<Cell>> = a
            .iter()
            .map(|(w, c)| {
                let f = w.factors().iter().map(|x| match x {
                    Cell::Zero => Cell::One,
                    Cell::One => Cell::Zero,
                    Cell::ZeroOne => Cell::ZeroOne,
                });
                (Word::new(f.collect()).unwrap(), c.clone())
            })
            .collect();
        prop_assert_eq!(swapped, a);
    }

    #[test]
    fn concordance_defects_agree(seed in any::<u64>(), xi in 0usize..3, yi in 0usize..3) {
        let algebras = [dual_numbers(0), dual_numbers(-1), dual_numbers(1)];
        let caps = ConcordanceCaps { arity: 3, word: 3, t: 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_omega_map(&algebras[xi], &algebras[yi], caps, 5, &mut rng);
        let (d1, d2) = concordance_defect_pair(&algebras[xi], &algebras[yi], &phi, caps).unwrap();
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn lxy_jacobi_random(seed in any::<u64>()) {
        let a = truncated_poly(1, 3);
        let l = lxy_build(&a, &dual_numbers(1), 4, 3).unwrap();
        for t in l.random_tuples(4, 10, &mut ChaCha8Rng::seed_from_u64(seed)) {
            prop_assert!(jacobi_defect(&l, &t).unwrap().is_zero());
        }
    }

    #[test]
    fn convolution_jacobi_random(t in prop::collection::vec(0usize..9, 1..=4)) {
        let c = interval_transfer::lawrence_sullivan::uvw_coalgebra(4).unwrap();
        let l = conv_linf(&c, &small_dga()).unwrap();
        prop_assert!(jacobi_defect(&l, &t).unwrap().is_zero());
    }

    #[test]
    fn mc_line_in_small_example(n in -6i64..6, d in 1i64..4) {
        // ℓ_1(λa) + ℓ_2(λa, λa)/2 = (λ + λ²/2) c vanishes only at λ ∈ {0, −2}.
        let l = mc_example();
        let lambda = frac(n, d);
        let alpha = l.elem(&[("a", lambda.clone())]).unwrap();
        let zero = mc_defect(&l, &alpha, 2).unwrap().is_zero();
        prop_assert_eq!(zero, lambda == q(0) || lambda == q(-2));
    }

    #[test]
    fn free_lie_bracket_is_graded_antisymmetric(i in 0usize..20, j in 0usize..20) {
        let lie = ls_algebra(4).unwrap();
        let basis = lie.hall_basis();
        let (x, y) = (&basis[i % basis.len()], &basis[j % basis.len()]);
        let px = lie.to_poly(&Vector::basis(x.clone()));
        let py = lie.to_poly(&Vector::basis(y.clone()));
        let sign = if (lie.hall_degree(x) * lie.hall_degree(y)).rem_euclid(2) == 1 { q(1) } else { q(-1) };
        let lhs = lie.normal_form(&lie.bracket(&px, &py)).unwrap();
        let rhs = lie.normal_form(&lie.bracket(&py, &px)).unwrap().scale(&sign);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn bernoulli_recurrence() {
    let b = bernoulli_table(20);
    for m in 1..20 {
        let s: Q = (0..=m).map(|j| Q::from_integer(binomial(m + 1, j)) * &b[j]).sum();
        assert_eq!(s, q(0), "m = {m}");
    }
    for n in 1..=12 {
        assert!(binomial_identity_check(n));
    }
}

#[test]
fn dual_basis_listing() {
    let b = dual_basis_upto(2);
    assert_eq!(b.len(), 6);
    assert!(b.contains(&Dual::Beta(2)));
}

#[test]
fn sample_dimensions() {
    assert_eq!(nilpotent3().dim(), 4);
    assert_eq!(ternary().arity_cap(), 3);
}
