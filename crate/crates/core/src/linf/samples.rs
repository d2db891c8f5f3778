//! Small algebras used by the tests, the acceptance checks and the CLI.

use super::conv::AInfAlgebra;
use super::TableLInf;
use crate::scalar::q;

/// `a` (−1), `c` (−2) with `ℓ_1(a) = c` and `ℓ_2(a, a) = c`; `−2a` is
/// Maurer–Cartan.
pub fn mc_example() -> TableLInf {
    let mut l = TableLInf::new(&[("a", -1, 1), ("c", -2, 2)], 2).unwrap();
    l.set_named(&["a"], &[("c", q(1))]).unwrap();
    l.set_named(&["a", "a"], &[("c", q(1))]).unwrap();
    l
}

/// `x₀` (0), `a` (−1) with `ℓ_2(x₀, a) = a` and no differential. Not
/// nilpotent: `x₀` sits in filtration level 0.
pub fn x0_a() -> TableLInf {
    let mut l = TableLInf::new(&[("x0", 0, 0), ("a", -1, 1)], 2).unwrap();
    l.set_named(&["x0", "a"], &[("a", q(1))]).unwrap();
    l
}

/// `a`, `b` (−1), `x` (0) with `ℓ_2(x, a) = b`: the flow of `x` from `a`
/// is `a + t b`.
pub fn nilpotent() -> TableLInf {
    let mut l = TableLInf::new(&[("x", 0, 1), ("a", -1, 1), ("b", -1, 2)], 2).unwrap();
    l.set_named(&["x", "a"], &[("b", q(1))]).unwrap();
    l
}

/// `x` (0), `a`, `b`, `c` (−1) with `ℓ_2(x, a) = b`, `ℓ_2(x, b) = c`: the
/// flow of `x` from `a` is `a + t b + t² c/2`.
pub fn nilpotent3() -> TableLInf {
    let mut l = TableLInf::new(&[("x", 0, 1), ("a", -1, 1), ("b", -1, 2), ("c", -1, 3)], 2).unwrap();
    l.set_named(&["x", "a"], &[("b", q(1))]).unwrap();
    l.set_named(&["x", "b"], &[("c", q(1))]).unwrap();
    l
}

/// `a`, `b` (−1), `c` (−2) with `ℓ_1(b) = c` and `ℓ_3(a, a, a) = c`; the
/// element `a − b/6` is Maurer–Cartan.
pub fn ternary() -> TableLInf {
    let mut l = TableLInf::new(&[("a", -1, 1), ("b", -1, 3), ("c", -2, 3)], 3).unwrap();
    l.set_named(&["b"], &[("c", q(1))]).unwrap();
    l.set_named(&["a", "a", "a"], &[("c", q(1))]).unwrap();
    l
}

/// A nilpotent dg Lie algebra with a nonzero differential and bracket:
/// `y` (0), `a`, `b` (−1), `c`, `e` (−2) with `d a = c`, `d b = e`,
/// `[y, a] = b` and `[y, c] = e`.
pub fn dg_lie() -> TableLInf {
    let mut l = TableLInf::new(&[("y", 0, 1), ("a", -1, 1), ("b", -1, 2), ("c", -2, 1), ("e", -2, 2)], 2).unwrap();
    l.set_named(&["a"], &[("c", q(1))]).unwrap();
    l.set_named(&["y", "a"], &[("b", q(1))]).unwrap();
    l.set_named(&["y", "c"], &[("e", q(1))]).unwrap();
    l.set_named(&["b"], &[("e", q(1))]).unwrap();
    l
}

/// `k[ε]/(ε²)` with `|ε| = deg`, unit `1`.
pub fn dual_numbers(deg: i64) -> AInfAlgebra {
    let mut a = AInfAlgebra::new(&[("1", 0), ("e", deg)], 2).unwrap();
    a.set_named(&["1", "1"], &[("1", q(1))]).unwrap();
    a.set_named(&["1", "e"], &[("e", q(1))]).unwrap();
    a.set_named(&["e", "1"], &[("e", q(1))]).unwrap();
    a
}

/// `x` (−1), `y` (−2) with `m_3(x, x, x) = y` and nothing else.
pub fn ternary_algebra() -> AInfAlgebra {
    let mut a = AInfAlgebra::new(&[("x", -1), ("y", -2)], 3).unwrap();
    a.set_named(&["x", "x", "x"], &[("y", q(1))]).unwrap();
    a
}

/// The dg algebra `span(1, ε, η)` with `|ε| = 0`, `|η| = 1`, `dη = ε` and
/// all products of `ε, η` zero.
pub fn small_dga() -> AInfAlgebra {
    let mut a = AInfAlgebra::new(&[("1", 0), ("e", 0), ("h", 1)], 2).unwrap();
    a.set_named(&["h"], &[("e", q(1))]).unwrap();
    for x in ["1", "e", "h"] {
        a.set_named(&["1", x], &[(x, q(1))]).unwrap();
        if x != "1" {
            a.set_named(&[x, "1"], &[(x, q(1))]).unwrap();
        }
    }
    a
}

/// The ground field in degree 0.
pub fn ground_field() -> AInfAlgebra {
    let mut a = AInfAlgebra::new(&[("1", 0)], 2).unwrap();
    a.set_named(&["1", "1"], &[("1", q(1))]).unwrap();
    a
}

/// `k[x]/(x^n)` with `|x| = deg`; basis `1, x, …, x^{n−1}`.
pub fn truncated_poly(deg: i64, n: usize) -> AInfAlgebra {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let basis: Vec<(&str, i64)> = names.iter().enumerate().map(|(i, s)| (s.as_str(), deg * i as i64)).collect();
    let mut a = AInfAlgebra::new(&basis, 2).unwrap();
    for i in 0..n {
        for j in 0..n - i {
            a.set(&[i, j], crate::vector::Vector::basis(i + j)).unwrap();
        }
    }
    a
}
