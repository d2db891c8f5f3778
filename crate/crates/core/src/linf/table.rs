//! L∞-algebras given by finite structure-constant tables.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{filtration_violations, Element, LInf};
use crate::error::{Error, Result};
use crate::scalar;
use crate::sign::{antisymmetric_odd, sorting_perm};
use crate::vector::Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableLInf {
    names: Vec<String>,
    degrees: Vec<i64>,
    weights: Vec<u32>,
    cap: usize,
    table: BTreeMap<Vec<usize>, Element>,
}

impl TableLInf {
    /// Basis `(name, degree, weight)`; brackets up to arity `cap`.
    pub fn new(basis: &[(&str, i64, u32)], cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::input("arity cap must be ≥ 1"));
        }
        let mut names = Vec::new();
        for (n, _, _) in basis {
            if names.contains(&n.to_string()) {
                return Err(Error::input(format!("duplicate basis element {n}")));
            }
            names.push(n.to_string());
        }
        Ok(TableLInf {
            names,
            degrees: basis.iter().map(|b| b.1).collect(),
            weights: basis.iter().map(|b| b.2).collect(),
            cap,
            table: BTreeMap::new(),
        })
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::input(format!("unknown basis element {name}")))
    }

    pub fn elem(&self, terms: &[(&str, scalar::Q)]) -> Result<Element> {
        let mut v = Vector::zero();
        for (n, c) in terms {
            v.add_term(self.index(n)?, c.clone());
        }
        Ok(v)
    }

    /// Sets `ℓ_k(args) = value`; the other orderings follow by graded
    /// antisymmetry. Degrees and the filtration are checked.
    pub fn set(&mut self, args: &[usize], value: Element) -> Result<()> {
        let k = args.len();
        if k == 0 || k > self.cap {
            return Err(Error::input(format!("arity {k} outside 1..={}", self.cap)));
        }
        if args.iter().any(|&i| i >= self.names.len()) || value.support().any(|&i| i >= self.names.len()) {
            return Err(Error::input("basis index out of range"));
        }
        let want = args.iter().map(|&i| self.degrees[i]).sum::<i64>() + k as i64 - 2;
        if value.support().any(|&o| self.degrees[o] != want) {
            return Err(Error::input(format!(
                "ℓ_{k}({}) must have degree {want}",
                self.render_args(args)
            )));
        }
        let w: u32 = args.iter().map(|&i| self.weights[i]).sum();
        if value.support().any(|&o| self.weights[o] < w) {
            return Err(Error::input(format!(
                "ℓ_{k}({}) leaves filtration level {w}",
                self.render_args(args)
            )));
        }
        let perm = sorting_perm(args);
        let sorted: Vec<usize> = perm.iter().map(|&p| args[p]).collect();
        let degs: Vec<i64> = args.iter().map(|&i| self.degrees[i]).collect();
        let value = if antisymmetric_odd(&perm, &degs) { -value } else { value };
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] && self.degrees[pair[0]].rem_euclid(2) == 0 && !value.is_zero() {
                return Err(Error::input(format!(
                    "ℓ_{k}({}) repeats an even element and must vanish",
                    self.render_args(args)
                )));
            }
        }
        if let Some(old) = self.table.get(&sorted) {
            if *old != value {
                return Err(Error::input(format!(
                    "conflicting values for ℓ_{k}({})",
                    self.render_args(args)
                )));
            }
        }
        if value.is_zero() {
            self.table.remove(&sorted);
        } else {
            self.table.insert(sorted, value);
        }
        Ok(())
    }

    pub fn set_named(&mut self, args: &[&str], value: &[(&str, scalar::Q)]) -> Result<()> {
        let idx = args.iter().map(|n| self.index(n)).collect::<Result<Vec<_>>>()?;
        let v = self.elem(value)?;
        self.set(&idx, v)
    }

    fn render_args(&self, args: &[usize]) -> String {
        args.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(", ")
    }

    /// Canonical (sorted) argument tuples with nonzero brackets.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Element)> {
        self.table.iter()
    }

    /// Loads the JSON schema documented in the README.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::input(format!("algebra file: {e}")))?;
        let basis: Vec<(&str, i64, u32)> = file
            .basis
            .iter()
            .map(|b| (b.name.as_str(), b.degree, b.weight.unwrap_or(1)))
            .collect();
        let max_arity = file.brackets.keys().filter_map(|k| k.parse::<usize>().ok()).max();
        let cap = file.arity_cap.or(max_arity).unwrap_or(1).max(1);
        let mut l = TableLInf::new(&basis, cap)?;
        let mut rules: Vec<(usize, BracketRule)> = Vec::new();
        for d in file.differential {
            rules.push((1, BracketRule { inputs: vec![d.input], output: d.output }));
        }
        for (k, list) in file.brackets {
            let k: usize = k
                .parse()
                .map_err(|_| Error::input(format!("bracket arity {k} is not an integer")))?;
            for r in list {
                rules.push((k, r));
            }
        }
        for (k, r) in rules {
            if r.inputs.len() != k {
                return Err(Error::input(format!("arity-{k} bracket lists {} inputs", r.inputs.len())));
            }
            let idx = r.inputs.iter().map(|n| l.index(n)).collect::<Result<Vec<_>>>()?;
            let mut v = Vector::zero();
            for (n, c) in &r.output {
                v.add_term(l.index(n)?, scalar::parse(c)?);
            }
            l.set(&idx, v)?;
        }
        Ok(l)
    }

    /// Whether every stored bracket respects the filtration.
    pub fn filtration_ok(&self) -> bool {
        let tuples: Vec<Vec<usize>> = self.table.keys().cloned().collect();
        filtration_violations(self, &tuples).is_empty()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    basis: Vec<BasisEntry>,
    #[serde(default)]
    arity_cap: Option<usize>,
    #[serde(default)]
    differential: Vec<DiffRule>,
    #[serde(default)]
    brackets: BTreeMap<String, Vec<BracketRule>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisEntry {
    name: String,
    degree: i64,
    #[serde(default)]
    weight: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffRule {
    input: String,
    output: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketRule {
    inputs: Vec<String>,
    output: BTreeMap<String, String>,
}

impl LInf for TableLInf {
    fn dim(&self) -> usize {
        self.names.len()
    }

    fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    fn name(&self, i: usize) -> String {
        self.names[i].clone()
    }

    fn arity_cap(&self) -> usize {
        self.cap
    }

    fn bracket(&self, k: usize, args: &[usize]) -> Element {
        debug_assert_eq!(k, args.len());
        if k > self.cap {
            return Vector::zero();
        }
        let perm = sorting_perm(args);
        let sorted: Vec<usize> = perm.iter().map(|&p| args[p]).collect();
        match self.table.get(&sorted) {
            None => Vector::zero(),
            Some(v) => {
                let degs: Vec<i64> = args.iter().map(|&i| self.degrees[i]).collect();
                if antisymmetric_odd(&perm, &degs) {
                    -v.clone()
                } else {
                    v.clone()
                }
            }
        }
    }
}
