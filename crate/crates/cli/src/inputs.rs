//! Input files: elements, user coalgebras, concordance maps and Ω-extensions.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use interval_transfer::ainf::FiniteCoalgebra;
use interval_transfer::linf::conv::{AInfAlgebra, OmegaMap};
use interval_transfer::linf::curves::{Form, OmegaExtension, PolyCurve};
use interval_transfer::linf::{element_from_names, Element, LInf};
use interval_transfer::scalar;
use interval_transfer::tensor::Word;
use interval_transfer::{Error, Graded, Result, Vector};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

/// `{name: "p/q"}`.
pub fn element<L: LInf + ?Sized>(l: &L, path: &Path) -> Result<Element> {
    let terms: BTreeMap<String, String> = parse(path)?;
    element_from_names(l, &terms)
}

/// A named basis element of a user-supplied coalgebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    name: String,
    degree: i64,
}

impl Graded for Sym {
    fn degree(&self) -> i64 {
        self.degree
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoalgebraFile {
    basis: Vec<BasisEntry>,
    #[serde(default)]
    arity_cap: Option<usize>,
    #[serde(default)]
    operations: Vec<Operation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisEntry {
    name: String,
    degree: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Operation {
    element: String,
    arity: usize,
    terms: Vec<WordTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WordTerm {
    word: Vec<String>,
    coeff: String,
}

/// Loads a finite A∞-coalgebra. Without `arity_cap`, cooperations beyond
/// those listed are zero up to `min_cap`.
pub fn coalgebra(path: &Path, min_cap: usize) -> Result<FiniteCoalgebra<Sym>> {
    let file: CoalgebraFile = parse(path)?;
    let basis: Vec<Sym> = file
        .basis
        .into_iter()
        .map(|b| Sym {
            name: b.name,
            degree: b.degree,
        })
        .collect();
    let find = |n: &str| {
        basis
            .iter()
            .find(|s| s.name == n)
            .cloned()
            .ok_or_else(|| Error::input(format!("unknown basis element {n}")))
    };
    for (i, s) in basis.iter().enumerate() {
        if basis[..i].iter().any(|t| t.name == s.name) {
            return Err(Error::input(format!("basis element {} listed twice", s.name)));
        }
    }
    let listed = file.operations.iter().map(|o| o.arity).max().unwrap_or(1);
    let cap = match file.arity_cap {
        Some(c) if c < listed => {
            return Err(Error::input(format!("arity_cap {c} is below a listed arity {listed}")))
        }
        Some(c) => c,
        None => listed.max(min_cap),
    };
    let mut c = FiniteCoalgebra::new(basis.clone(), cap);
    let mut seen = BTreeMap::new();
    for op in file.operations {
        let x = find(&op.element)?;
        if seen.insert((op.element.clone(), op.arity), ()).is_some() {
            return Err(Error::input(format!("δ_{}({}) listed twice", op.arity, op.element)));
        }
        let mut v = Vector::zero();
        for t in op.terms {
            let w = t.word.iter().map(|n| find(n)).collect::<Result<Vec<_>>>()?;
            v.add_term(Word::new(w)?, scalar::parse(&t.coeff)?);
        }
        c.set(op.arity, x, v)?;
    }
    Ok(c)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiFile {
    components: Vec<PhiComponent>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiComponent {
    word: Vec<String>,
    terms: Vec<PhiTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiTerm {
    y: String,
    t: usize,
    #[serde(default)]
    dt: bool,
    coeff: String,
}

/// A map `s·Bar(X) → s(Y ⊗ Ω_T)` given by its components on bar words.
pub fn omega_map(x: &AInfAlgebra, y: &AInfAlgebra, path: &Path) -> Result<OmegaMap> {
    let file: PhiFile = parse(path)?;
    let mut out = OmegaMap::new();
    for comp in file.components {
        if comp.word.is_empty() {
            return Err(Error::input("a component has an empty word"));
        }
        let w = comp.word.iter().map(|n| x.index(n)).collect::<Result<Vec<_>>>()?;
        let mut v = Vector::zero();
        for t in comp.terms {
            let f = if t.dt { Form::TDt(t.t) } else { Form::T(t.t) };
            v.add_term((y.index(&t.y)?, f), scalar::parse(&t.coeff)?);
        }
        let slot: &mut Vector<(usize, Form)> = out.entry(w).or_default();
        *slot += &v;
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaFile {
    beta_m1: Vec<BTreeMap<String, String>>,
    beta_0: Vec<BTreeMap<String, String>>,
}

/// `β₋₁ + β₀·dt` given by `t`-power coefficients; returns it with its
/// truncation `T`.
pub fn omega_extension<L: LInf + ?Sized>(l: &L, path: &Path) -> Result<(OmegaExtension, usize)> {
    let file: BetaFile = parse(path)?;
    if file.beta_m1.is_empty() || file.beta_m1.len() != file.beta_0.len() {
        return Err(Error::input("beta_m1 and beta_0 must list the same positive number of t-powers"));
    }
    let curve = |c: &[BTreeMap<String, String>]| -> Result<PolyCurve> {
        Ok(PolyCurve {
            coeffs: c.iter().map(|m| element_from_names(l, m)).collect::<Result<_>>()?,
        })
    };
    let t = file.beta_m1.len() - 1;
    Ok((
        OmegaExtension {
            beta_m1: curve(&file.beta_m1)?,
            beta_0: curve(&file.beta_0)?,
        },
        t,
    ))
}
