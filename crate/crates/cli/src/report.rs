//! Run reports and their JSON rendering.
//!
//! Objects are `serde_json::Map`s, which keep keys sorted, and every term list
//! follows the ordering of the underlying vector, so output is byte-stable.

use std::fmt::Debug;
use std::time::Duration;

use interval_transfer::ainf::FiniteCoalgebra;
use interval_transfer::ainf::Label;
use interval_transfer::linf::{named, Element, LInf};
use interval_transfer::scalar::{self, Q};
use interval_transfer::tensor::TensorSum;
use interval_transfer::Vector;
use serde_json::{json, Map, Value};

#[derive(Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub defect: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, defect: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            defect,
        }
    }

    /// Passes when `defect` renders as an empty list or object.
    pub fn zero(name: impl Into<String>, defect: Value) -> Self {
        let passed = match &defect {
            Value::Array(a) => a.is_empty(),
            Value::Object(o) => o.is_empty(),
            Value::Null => true,
            _ => false,
        };
        Check::new(name, passed, defect)
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub args: Value,
    pub checks: Vec<Check>,
    pub result: Value,
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(command: &'static str, args: Value) -> Self {
        Report {
            command,
            args,
            checks: Vec::new(),
            result: Value::Null,
            elapsed: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": status(c.passed),
                    "defect": c.defect,
                })
            })
            .collect();
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("args".into(), self.args.clone());
        out.insert("checks".into(), Value::Array(checks));
        out.insert("result".into(), self.result.clone());
        out.insert("status".into(), json!(status(self.passed())));
        if let Some(t) = self.elapsed {
            out.insert("wall_time_s".into(), json!(format!("{:.3}", t.as_secs_f64())));
        }
        Value::Object(out)
    }
}

pub fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

pub fn rational(x: &Q) -> Value {
    Value::String(scalar::format(x))
}

pub fn label<B: Debug>(b: &B) -> String {
    format!("{b:?}")
}

/// `[{basis, coeff}]` for a vector with printable basis.
pub fn terms<B: Ord + Clone + Debug>(v: &Vector<B>) -> Value {
    Value::Array(
        v.iter()
            .map(|(b, c)| json!({ "basis": label(b), "coeff": rational(c) }))
            .collect(),
    )
}

/// `[{word: [...], coeff}]`.
pub fn word_terms<B: Ord + Clone + Debug>(v: &TensorSum<B>) -> Value {
    Value::Array(
        v.iter()
            .map(|(w, c)| {
                let word: Vec<String> = w.factors().iter().map(label).collect();
                json!({ "word": word, "coeff": rational(c) })
            })
            .collect(),
    )
}

/// `{name: coeff}`, the same shape as element input files.
pub fn element<L: LInf + ?Sized>(l: &L, x: &Element) -> Value {
    let mut m = Map::new();
    for (n, c) in named(l, x) {
        m.insert(n, rational(&c));
    }
    Value::Object(m)
}

/// The coalgebra file format read by `coherence --input`.
pub fn coalgebra<B: Label>(c: &FiniteCoalgebra<B>, max_arity: usize) -> Value {
    let basis: Vec<Value> = c
        .basis()
        .iter()
        .map(|b| json!({ "name": label(b), "degree": b.degree() }))
        .collect();
    let ops: Vec<Value> = c
        .entries()
        .map(|((x, k), v)| json!({ "element": label(x), "arity": k, "terms": word_terms(v) }))
        .collect();
    json!({ "basis": basis, "arity_cap": max_arity, "operations": ops })
}
