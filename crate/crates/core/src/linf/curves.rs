//! Polynomial curves of Maurer–Cartan elements: `L ⊗ k[t]/(t^{T+1})`,
//! `L ⊗ Ω_T`, gauge flows and their Quillen homotopies.
//!
//! `Ω_T` is the polynomial de Rham algebra of the interval modulo the dg
//! ideal `(t^{T+1}, t^T dt)`, with `|dt| = −1`.


use super::{gauge_field, mc_defect, require_degree, twisted_l1, Element, LInf};
use crate::error::{Error, Result};
use crate::scalar::{q, Q};
use crate::vector::Vector;

/// `L ⊗ k[t]/(t^{T+1})`; basis `x_i t^j` has index `i(T+1) + j` and weight
/// `w(x_i) + j`.
pub struct TruncPoly<L> {
    pub base: L,
    pub t: usize,
}

impl<L: LInf> TruncPoly<L> {
    pub fn new(base: L, t: usize) -> Self {
        TruncPoly { base, t }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.t + 1) + j
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / (self.t + 1), idx % (self.t + 1))
    }

    /// Coefficients by power of `t` into a single element.
    pub fn from_curve(&self, c: &PolyCurve) -> Element {
        let mut out = Vector::zero();
        for (j, v) in c.coeffs.iter().enumerate().take(self.t + 1) {
            for (&i, x) in v.iter() {
                out.add_term(self.index(i, j), x.clone());
            }
        }
        out
    }

    pub fn to_curve(&self, v: &Element) -> PolyCurve {
        let mut coeffs = vec![Vector::zero(); self.t + 1];
        for (&idx, x) in v.iter() {
            let (i, j) = self.split(idx);
            coeffs[j].add_term(i, x.clone());
        }
        PolyCurve { coeffs }
    }

    pub fn constant(&self, x: &Element) -> Element {
        x.map_basis(|&i| self.index(i, 0))
    }
}

impl<L: LInf> LInf for TruncPoly<L> {
    fn dim(&self) -> usize {
        self.base.dim() * (self.t + 1)
    }
    fn degree(&self, i: usize) -> i64 {
        self.base.degree(self.split(i).0)
    }
    fn weight(&self, i: usize) -> u32 {
        let (b, j) = self.split(i);
        self.base.weight(b) + j as u32
    }
    fn name(&self, i: usize) -> String {
        let (b, j) = self.split(i);
        match j {
            0 => self.base.name(b),
            1 => format!("{}·t", self.base.name(b)),
            _ => format!("{}·t^{j}", self.base.name(b)),
        }
    }
    fn arity_cap(&self) -> usize {
        self.base.arity_cap()
    }
    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        let mut base = Vec::with_capacity(k);
        let mut tdeg = 0;
        for &a in args {
            let (b, j) = self.split(a);
            base.push(b);
            tdeg += j;
        }
        if tdeg > self.t {
            return Vector::zero();
        }
        self.base.bracket(k, &base).map_basis(|&o| self.index(o, tdeg))
    }
}

/// A basis form of `Ω_T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Form {
    T(usize),
    TDt(usize),
}

/// `L ⊗ Ω_T`.
pub struct OmegaT<L> {
    pub base: L,
    pub t: usize,
}

impl<L: LInf> OmegaT<L> {
    pub fn new(base: L, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::input("t-degree must be ≥ 1"));
        }
        Ok(OmegaT { base, t })
    }

    fn forms(&self) -> usize {
        2 * self.t + 1
    }

    pub fn index(&self, i: usize, f: Form) -> usize {
        let fi = match f {
            Form::T(j) => j,
            Form::TDt(j) => self.t + 1 + j,
        };
        i * self.forms() + fi
    }

    pub fn split(&self, idx: usize) -> (usize, Form) {
        let (i, f) = (idx / self.forms(), idx % self.forms());
        if f <= self.t {
            (i, Form::T(f))
        } else {
            (i, Form::TDt(f - self.t - 1))
        }
    }

    fn mul(&self, a: Form, b: Form) -> Option<Form> {
        match (a, b) {
            (Form::T(x), Form::T(y)) if x + y <= self.t => Some(Form::T(x + y)),
            (Form::T(x), Form::TDt(y)) | (Form::TDt(y), Form::T(x)) if x + y < self.t => Some(Form::TDt(x + y)),
            _ => None,
        }
    }

    /// `β₋₁ − β₀·dt` for an extension written in the displayed form.
    pub fn embed(&self, beta: &OmegaExtension) -> Element {
        let mut out = Vector::zero();
        for (j, v) in beta.beta_m1.coeffs.iter().enumerate().take(self.t + 1) {
            for (&i, x) in v.iter() {
                out.add_term(self.index(i, Form::T(j)), x.clone());
            }
        }
        for (j, v) in beta.beta_0.coeffs.iter().enumerate().take(self.t) {
            for (&i, x) in v.iter() {
                out.add_term(self.index(i, Form::TDt(j)), -x.clone());
            }
        }
        out
    }

    /// Splits an element into its `t^j` and `t^j dt` coefficients.
    pub fn components(&self, v: &Element) -> (PolyCurve, PolyCurve) {
        let mut a = vec![Vector::zero(); self.t + 1];
        let mut b = vec![Vector::zero(); self.t];
        for (&idx, x) in v.iter() {
            match self.split(idx) {
                (i, Form::T(j)) => a[j].add_term(i, x.clone()),
                (i, Form::TDt(j)) => b[j].add_term(i, x.clone()),
            }
        }
        (PolyCurve { coeffs: a }, PolyCurve { coeffs: b })
    }
}

impl<L: LInf> LInf for OmegaT<L> {
    fn dim(&self) -> usize {
        self.base.dim() * self.forms()
    }
    fn degree(&self, i: usize) -> i64 {
        let (b, f) = self.split(i);
        self.base.degree(b) - matches!(f, Form::TDt(_)) as i64
    }
    fn weight(&self, i: usize) -> u32 {
        let (b, f) = self.split(i);
        self.base.weight(b)
            + match f {
                Form::T(j) | Form::TDt(j) => j as u32,
            }
    }
    fn name(&self, i: usize) -> String {
        let (b, f) = self.split(i);
        match f {
            Form::T(0) => self.base.name(b),
            Form::T(j) => format!("{}·t^{j}", self.base.name(b)),
            Form::TDt(j) => format!("{}·t^{j}dt", self.base.name(b)),
        }
    }
    fn arity_cap(&self) -> usize {
        self.base.arity_cap()
    }
    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        let parts: Vec<(usize, Form)> = args.iter().map(|&a| self.split(a)).collect();
        let mut out = Vector::zero();
        if k == 1 {
            let (x, f) = parts[0];
            out += self.base.bracket(1, &[x]).map_basis(|&o| self.index(o, f));
            if let Form::T(j) = f {
                if j >= 1 {
                    let c = if self.base.degree(x).rem_euclid(2) == 1 { -q(j as i64) } else { q(j as i64) };
                    out.add_term(self.index(x, Form::TDt(j - 1)), c);
                }
            }
            return out;
        }
        let mut form = Form::T(0);
        let mut neg = false;
        for (i, &(_, f)) in parts.iter().enumerate() {
            if let Form::TDt(_) = f {
                let passed: i64 = parts[i + 1..].iter().map(|&(x, _)| self.base.degree(x)).sum();
                neg ^= passed.rem_euclid(2) == 1;
            }
            match self.mul(form, f) {
                Some(g) => form = g,
                None => return out,
            }
        }
        let base: Vec<usize> = parts.iter().map(|&(x, _)| x).collect();
        let v = self.base.bracket(k, &base).map_basis(|&o| self.index(o, form));
        if neg {
            -v
        } else {
            v
        }
    }
}

/// An element of `L[t]/(t^{T+1})` stored by powers of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCurve {
    pub coeffs: Vec<Element>,
}

impl PolyCurve {
    pub fn constant(x: &Element, t: usize) -> Self {
        let mut coeffs = vec![Vector::zero(); t + 1];
        coeffs[0] = x.clone();
        PolyCurve { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn at_zero(&self) -> Element {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Sum of all coefficients.
    pub fn at_one(&self) -> Element {
        let mut out = Vector::zero();
        for c in &self.coeffs {
            out += c;
        }
        out
    }

    /// `d/dt`, keeping the same truncation (top coefficient zero).
    pub fn derivative(&self) -> Self {
        let mut coeffs: Vec<Element> = (1..self.coeffs.len())
            .map(|j| self.coeffs[j].scale(&q(j as i64)))
            .collect();
        coeffs.push(Vector::zero());
        PolyCurve { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, t: usize) -> Self {
        PolyCurve {
            coeffs: self.coeffs.iter().take(t + 1).cloned().collect(),
        }
    }
}

/// Degree −1 and degree 0 parts of `β ∈ L ⊗ Ω`, written `β₋₁ + β₀·dt` as in
/// the displayed component equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaExtension {
    pub beta_m1: PolyCurve,
    pub beta_0: PolyCurve,
}

/// Solves `α′ = −ℓ^α_1(x)` with `α(0) = α₀` modulo `t^{T+1}`.
pub fn gauge_flow<L: LInf>(l: &L, alpha0: &Element, x: &Element, t: usize) -> Result<PolyCurve> {
    require_degree(l, alpha0, -1, "the initial point")?;
    require_degree(l, x, 0, "the gauge parameter")?;
    if !mc_defect(l, alpha0, l.arity_cap())?.is_zero() {
        return Err(Error::input("initial point is not Maurer–Cartan"));
    }
    let p = TruncPoly::new(l, t);
    let xt = p.constant(x);
    let mut alpha = p.constant(alpha0);
    for j in 0..t {
        let v = gauge_field(&p, &xt, &alpha)?;
        let inv = Q::new(1.into(), ((j + 1) as i64).into());
        for (&idx, c) in v.iter() {
            let (i, k) = p.split(idx);
            if k == j {
                alpha.add_term(p.index(i, j + 1), c * &inv);
            }
        }
    }
    Ok(p.to_curve(&alpha))
}

/// `β = α(t) + x·dt` with `α` the gauge flow.
pub fn quillen_from_gauge<L: LInf>(l: &L, alpha0: &Element, x: &Element, t: usize) -> Result<OmegaExtension> {
    Ok(OmegaExtension {
        beta_m1: gauge_flow(l, alpha0, x, t)?,
        beta_0: PolyCurve::constant(x, t),
    })
}

/// The two component equations:
/// `Σ ℓ_k(β₋₁^k)/k!` modulo `t^{T+1}` and `β′₋₁ + Σ k ℓ_k(β₋₁^{k−1}, β₀)/k!`
/// modulo `t^T` (its `t^T` coefficient would need `β₋₁` beyond the
/// truncation).
pub fn omega_mc_check<L: LInf>(
    l: &L,
    beta: &OmegaExtension,
    cap: usize,
    t: usize,
) -> Result<(PolyCurve, PolyCurve)> {
    if t == 0 {
        return Err(Error::input("t-degree must be ≥ 1"));
    }
    let p = TruncPoly::new(l, t);
    let b1 = p.from_curve(&beta.beta_m1);
    let b0 = p.from_curve(&beta.beta_0);
    let free = p.to_curve(&mc_defect(&p, &b1, cap)?);
    let d = p.from_curve(&beta.beta_m1.truncate(t).derivative()) + twisted_l1(&p, &b1, &b0)?;
    let dt = p.to_curve(&d).truncate(t - 1);
    Ok((free, dt))
}

/// The same pair read off from the Maurer–Cartan series of `β₋₁ − β₀·dt` in
/// `L ⊗ Ω_T`; the `dt` part is negated to match [`omega_mc_check`].
pub fn omega_mc_genuine<L: LInf>(
    l: &L,
    beta: &OmegaExtension,
    cap: usize,
    t: usize,
) -> Result<(PolyCurve, PolyCurve)> {
    let o = OmegaT::new(l, t)?;
    let e = o.embed(beta);
    let (a, b) = o.components(&mc_defect(&o, &e, cap)?);
    Ok((
        a,
        PolyCurve {
            coeffs: b.coeffs.into_iter().map(|c| -c).collect(),
        },
    ))
}
