//! `itx`: exact verification of the interval transfer and its L∞ consequences.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.

mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use interval_transfer::acceptance;
use interval_transfer::ainf::{coherence_failures, stabilized_transfer, transfer, DualForms, FiniteCoalgebra, Label};
use interval_transfer::combinatorics::bernoulli_table;
use interval_transfer::interval::{decorate, dual_basis_upto, Cell};
use interval_transfer::lawrence_sullivan::{
    cell_dictionary, cylinder_check, d_square_defect, hall_basis, ls_differential, uvw_coalgebra,
};
use interval_transfer::linf::conv::{concordance_defect_pair, AInfAlgebra, ConcordanceCaps, ConcordanceKey};
use interval_transfer::linf::curves::{gauge_flow, omega_mc_check, omega_mc_genuine, quillen_from_gauge, Form, PolyCurve};
use interval_transfer::linf::{mc_defect, LInf, TableLInf};
use interval_transfer::retract::make_interval_retract;
use interval_transfer::scalar::{binomial, Q};
use interval_transfer::{Error, Result, Vector};

use report::{Check, Report};

#[derive(Parser)]
#[command(name = "itx", version, about = "Exact checks for the interval A∞ transfer and related L∞ constructions")]
struct Cli {
    /// Compact JSON output (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Add the wall time to the report (makes output non-deterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bernoulli numbers B_0..B_max with B_1 = -1/2.
    Bernoulli {
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Retract identities for (θ, ω_N, K_N) on dual basis indices ≤ M.
    RetractCheck {
        #[arg(long, default_value_t = 6)]
        level: u32,
        /// Defaults to twice the level.
        #[arg(long)]
        max_index: Option<u32>,
    },
    /// Transferred A∞-coalgebra structure on the cells.
    Transfer {
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        /// Retract level N > max-arity; defaults to max-arity + 1.
        #[arg(long, conflicts_with = "stabilized")]
        level: Option<u32>,
        /// Compare four consecutive levels and require agreement.
        #[arg(long)]
        stabilized: bool,
        /// Keep the cell labels 0, 1, 01 instead of u, v, w.
        #[arg(long)]
        cells: bool,
    },
    /// A∞ coherence (D² = 0) of the built-in structures or of a coalgebra file.
    Coherence {
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Differential of the cylinder Lie algebra on generators and d² residuals.
    Ls {
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
    },
    /// Whether (a, b, z) ↦ (α₀, α₁, ξ) respects the cylinder differential.
    CylinderCheck {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        alpha0: PathBuf,
        #[arg(long)]
        alpha1: PathBuf,
        #[arg(long)]
        xi: PathBuf,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Maurer–Cartan defect of an element.
    McCheck {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        element: PathBuf,
        /// Highest bracket arity summed; defaults to the algebra's arity cap.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Gauge flow α' = -ℓ^α_1(x) from α₀, modulo t^{T+1}.
    GaugeFlow {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        alpha0: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 6)]
        truncation: usize,
    },
    /// Maurer–Cartan equations of β₋₁ + β₀dt in L ⊗ Ω.
    QuillenCheck {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Build β from the gauge flow of --x starting at --alpha0.
        #[arg(long, requires = "x", conflicts_with = "beta")]
        alpha0: Option<PathBuf>,
        #[arg(long, requires = "alpha0")]
        x: Option<PathBuf>,
        /// Read β from a file instead; its length fixes the truncation.
        #[arg(long, required_unless_present = "alpha0")]
        beta: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        truncation: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Morphism and Maurer–Cartan defects of a map Bar(X) → Y ⊗ Ω_T.
    LxyDefect {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        /// Arity, word-length and t-degree caps.
        #[arg(long, default_value = "6,6,6")]
        caps: String,
    },
    /// θ^{⊗n} δ^{n-1} ω_N applied to a cell.
    Decorate {
        #[arg(long)]
        cell: String,
        #[arg(long)]
        arity: usize,
        /// Defaults to arity + 1.
        #[arg(long)]
        level: Option<u32>,
    },
    /// Run acceptance criteria (all of them unless --only is given).
    AllAcceptance {
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct AlgebraArg {
    /// L∞-algebra file.
    #[arg(long)]
    algebra: PathBuf,
}

impl AlgebraArg {
    fn load(&self) -> Result<TableLInf> {
        TableLInf::from_json(&inputs::read(&self.algebra)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli.command) {
        Ok(mut r) => {
            if cli.timing {
                r.elapsed = Some(start.elapsed());
            }
            let v = r.to_json();
            let text = if cli.pretty {
                serde_json::to_string_pretty(&v)
            } else {
                serde_json::to_string(&v)
            };
            println!("{}", text.expect("reports serialize"));
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("itx: {e}");
            ExitCode::from(match e {
                Error::Input(_) => 2,
                _ => 1,
            })
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Bernoulli { max } => bernoulli(*max),
        Command::RetractCheck { level, max_index } => retract_check(*level, max_index.unwrap_or(2 * level)),
        Command::Transfer {
            max_arity,
            level,
            stabilized,
            cells,
        } => transfer_cmd(*max_arity, *level, *stabilized, *cells),
        Command::Coherence { max_arity, input } => coherence(*max_arity, input.as_ref()),
        Command::Ls { max_weight } => ls(*max_weight),
        Command::CylinderCheck {
            algebra,
            alpha0,
            alpha1,
            xi,
            cap,
        } => {
            let l = algebra.load()?;
            let a0 = inputs::element(&l, alpha0)?;
            let a1 = inputs::element(&l, alpha1)?;
            let z = inputs::element(&l, xi)?;
            let rep = cylinder_check(&l, &a0, &a1, &z, *cap)?;
            let mut r = Report::new(
                "cylinder-check",
                json!({ "algebra": algebra.algebra, "alpha0": alpha0, "alpha1": alpha1, "xi": xi, "cap": cap }),
            );
            r.checks.push(Check::zero("Maurer–Cartan α₀", report::element(&l, &rep.mc_alpha0)));
            r.checks.push(Check::zero("Maurer–Cartan α₁", report::element(&l, &rep.mc_alpha1)));
            r.checks.push(Check::zero("cylinder relation", report::element(&l, &rep.relation)));
            Ok(r)
        }
        Command::McCheck { algebra, element, cap } => {
            let l = algebra.load()?;
            let a = inputs::element(&l, element)?;
            let cap = cap.unwrap_or(l.arity_cap());
            let d = mc_defect(&l, &a, cap)?;
            let mut r = Report::new("mc-check", json!({ "algebra": algebra.algebra, "element": element, "cap": cap }));
            r.checks.push(Check::zero("Maurer–Cartan", report::element(&l, &d)));
            Ok(r)
        }
        Command::GaugeFlow {
            algebra,
            alpha0,
            x,
            truncation,
        } => {
            let l = algebra.load()?;
            let a0 = inputs::element(&l, alpha0)?;
            let xv = inputs::element(&l, x)?;
            let t = *truncation;
            let curve = gauge_flow(&l, &a0, &xv, t)?;
            let beta = quillen_from_gauge(&l, &a0, &xv, t)?;
            let (mc, flow) = omega_mc_check(&l, &beta, l.arity_cap(), t)?;
            let mut r = Report::new(
                "gauge-flow",
                json!({ "algebra": algebra.algebra, "alpha0": alpha0, "x": x, "truncation": t }),
            );
            r.checks.push(Check::zero("α(t) is Maurer–Cartan mod t^(T+1)", curve_json(&l, &mc)));
            r.checks.push(Check::zero("flow equation mod t^T", curve_json(&l, &flow)));
            r.result = json!({
                "coefficients": curve_json_dense(&l, &curve),
                "endpoint": report::element(&l, &curve.at_one()),
            });
            Ok(r)
        }
        Command::QuillenCheck {
            algebra,
            alpha0,
            x,
            beta,
            truncation,
            cap,
        } => {
            let l = algebra.load()?;
            let (b, t) = match (alpha0, x, beta) {
                (Some(a0), Some(xp), _) => {
                    let a0 = inputs::element(&l, a0)?;
                    let xv = inputs::element(&l, xp)?;
                    (quillen_from_gauge(&l, &a0, &xv, *truncation)?, *truncation)
                }
                (_, _, Some(path)) => inputs::omega_extension(&l, path)?,
                _ => return Err(Error::input("give either --alpha0 and --x, or --beta")),
            };
            let cap = cap.unwrap_or(l.arity_cap());
            let (mc, dt) = omega_mc_check(&l, &b, cap, t)?;
            let genuine = omega_mc_genuine(&l, &b, cap, t)?;
            let mut r = Report::new(
                "quillen-check",
                json!({
                    "algebra": algebra.algebra, "alpha0": alpha0, "x": x, "beta": beta,
                    "truncation": t, "cap": cap,
                }),
            );
            r.checks.push(Check::zero("Maurer–Cartan component mod t^(T+1)", curve_json(&l, &mc)));
            r.checks.push(Check::zero("dt component mod t^T", curve_json(&l, &dt)));
            let agree = genuine == (mc.clone(), dt.clone());
            r.checks.push(Check::new("component equations match the series in L ⊗ Ω", agree, Value::Null));
            r.result = json!({
                "beta_m1": curve_json_dense(&l, &b.beta_m1),
                "beta_0": curve_json_dense(&l, &b.beta_0),
            });
            Ok(r)
        }
        Command::LxyDefect { x, y, phi, caps } => lxy_defect(x, y, phi, caps),
        Command::Decorate { cell, arity, level } => {
            let c = Cell::parse(cell)?;
            let level = level.unwrap_or(*arity as u32 + 1);
            let v = decorate(c, *arity, level)?;
            let mut r = Report::new("decorate", json!({ "cell": cell, "arity": arity, "level": level }));
            r.result = report::word_terms(&v);
            Ok(r)
        }
        Command::AllAcceptance { only } => all_acceptance(only),
    }
}

fn bernoulli(max: usize) -> Result<Report> {
    let b = bernoulli_table(max);
    let mut bad = Vec::new();
    for m in 1..=max {
        let s: Q = (0..=m).map(|j| Q::from_integer(binomial(m + 1, j)) * &b[j]).sum();
        if s != Q::from_integer(0.into()) {
            bad.push(json!({ "m": m, "sum": report::rational(&s) }));
        }
    }
    let mut r = Report::new("bernoulli", json!({ "max": max }));
    r.checks.push(Check::zero("Σ_j C(m+1, j) B_j = 0", Value::Array(bad)));
    r.result = json!({
        "convention": "B_1 = -1/2",
        "values": b.iter().map(report::rational).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn failures_json(f: &[interval_transfer::retract::RetractFailure]) -> Value {
    Value::Array(
        f.iter()
            .map(|x| json!({ "identity": x.identity, "element": x.element, "defect": x.defect }))
            .collect(),
    )
}

fn retract_check(level: u32, max_index: u32) -> Result<Report> {
    let mut rt = make_interval_retract(level)?;
    rt.big_sample = dual_basis_upto(max_index);
    let mut r = Report::new("retract-check", json!({ "level": level, "max_index": max_index }));
    r.checks.push(Check::zero("p∘i = id, d∘p = p∘d, d∘i = i∘d, id − i∘p = dH + Hd", failures_json(&rt.verify())));
    r.checks.push(Check::zero("H∘H = 0, p∘H = 0, H∘i = 0", failures_json(&rt.verify_side_conditions())));
    r.result = json!({ "dual_elements_checked": rt.big_sample.len(), "cells_checked": rt.small_basis.len() });
    Ok(r)
}

fn transfer_cmd(max_arity: usize, level: Option<u32>, stabilized: bool, cells: bool) -> Result<Report> {
    let mut r = Report::new(
        "transfer",
        json!({
            "max_arity": max_arity,
            "level": level,
            "stabilized": stabilized,
            "labels": if cells { "cells" } else { "uvw" },
        }),
    );
    let t = if stabilized {
        let (t, rep) = stabilized_transfer(max_arity)?;
        r.checks.push(Check::new(
            format!("levels {:?} agree", rep.levels),
            rep.agree,
            Value::Null,
        ));
        t
    } else {
        let n = level.unwrap_or(max_arity as u32 + 1);
        if (n as usize) <= max_arity {
            return Err(Error::input(format!(
                "level {n} is not above arity {max_arity}; results are only stable for N > arity"
            )));
        }
        transfer(&DualForms, &make_interval_retract(n)?, max_arity)?
    };
    r.result = if cells {
        report::coalgebra(&t, max_arity)
    } else {
        report::coalgebra(&t.relabel(&cell_dictionary())?, max_arity)
    };
    Ok(r)
}

fn coherence_check<B: Label>(name: &str, c: &FiniteCoalgebra<B>, max_arity: usize) -> Result<Check> {
    let f = coherence_failures(c, c.basis(), max_arity)?;
    let defects: Vec<Value> = f
        .iter()
        .map(|(k, x, d)| json!({ "arity": k, "element": report::label(x), "defect": report::word_terms(d) }))
        .collect();
    Ok(Check::zero(name, Value::Array(defects)))
}

fn coherence(max_arity: usize, input: Option<&PathBuf>) -> Result<Report> {
    let mut r = Report::new("coherence", json!({ "max_arity": max_arity, "input": input }));
    match input {
        Some(path) => {
            let c = inputs::coalgebra(path, max_arity)?;
            r.checks.push(coherence_check("input coalgebra", &c, max_arity)?);
        }
        None => {
            let (t, _) = stabilized_transfer(max_arity)?;
            r.checks.push(coherence_check("transferred structure on cells", &t, max_arity)?);
            r.checks.push(coherence_check("uvw structure", &uvw_coalgebra(max_arity)?, max_arity)?);
        }
    }
    Ok(r)
}

fn ls(max_weight: usize) -> Result<Report> {
    let mut r = Report::new("ls", json!({ "max_weight": max_weight }));
    let mut d = serde_json::Map::new();
    for g in ["a", "b", "z"] {
        d.insert(g.into(), report::terms(&ls_differential(g, max_weight)?));
        r.checks.push(Check::zero(format!("d²({g}) = 0"), report::terms(&d_square_defect(g, max_weight)?)));
    }
    r.result = json!({
        "differential": d,
        "hall_basis_size": hall_basis(max_weight)?.len(),
    });
    Ok(r)
}

fn curve_json_dense<L: LInf>(l: &L, c: &PolyCurve) -> Value {
    Value::Array(c.coeffs.iter().map(|x| report::element(l, x)).collect())
}

/// Nonzero coefficients only, keyed by the power of `t`.
fn curve_json<L: LInf>(l: &L, c: &PolyCurve) -> Value {
    Value::Array(
        c.coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| json!({ "t_power": j, "value": report::element(l, x) }))
            .collect(),
    )
}

fn parse_caps(s: &str) -> Result<ConcordanceCaps> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::input(format!("caps {s:?} must be three integers K,W,T")))?;
    match parts[..] {
        [arity, word, t] => Ok(ConcordanceCaps { arity, word, t }),
        _ => Err(Error::input(format!("caps {s:?} must be three integers K,W,T"))),
    }
}

fn concordance_json(x: &AInfAlgebra, y: &AInfAlgebra, v: &Vector<ConcordanceKey>) -> Value {
    Value::Array(
        v.iter()
            .map(|((w, yi, f), c)| {
                let word: Vec<&str> = w.iter().map(|&i| x.name(i)).collect();
                let form = match f {
                    Form::T(j) => format!("t^{j}"),
                    Form::TDt(j) => format!("t^{j} dt"),
                };
                json!({ "word": word, "y": y.name(*yi), "form": form, "coeff": report::rational(c) })
            })
            .collect(),
    )
}

fn lxy_defect(x: &PathBuf, y: &PathBuf, phi: &PathBuf, caps: &str) -> Result<Report> {
    let c = parse_caps(caps)?;
    let xa = AInfAlgebra::from_json(&inputs::read(x)?)?;
    let ya = AInfAlgebra::from_json(&inputs::read(y)?)?;
    let map = inputs::omega_map(&xa, &ya, phi)?;
    let (d1, d2) = concordance_defect_pair(&xa, &ya, &map, c)?;
    let mut r = Report::new(
        "lxy-defect",
        json!({ "x": x, "y": y, "phi": phi, "caps": { "arity": c.arity, "word": c.word, "t": c.t } }),
    );
    r.checks.push(Check::zero("morphism defect", concordance_json(&xa, &ya, &d1)));
    r.checks.push(Check::zero("Maurer–Cartan defect in L(X,Y) ⊗ Ω", concordance_json(&xa, &ya, &d2)));
    r.checks.push(Check::zero("defects agree", concordance_json(&xa, &ya, &(&d1 - &d2))));
    Ok(r)
}

fn all_acceptance(only: &[u8]) -> Result<Report> {
    let ids: Vec<u8> = if only.is_empty() { (1..=9).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|i| !(1..=9).contains(*i)) {
        return Err(Error::input(format!("no criterion {bad}; expected 1 to 9")));
    }
    // Criteria are independent; run them side by side and report in id order.
    let mut results: Vec<acceptance::Criterion> = std::thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&i| s.spawn(move || acceptance::run(i))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect::<Result<_>>()
    })?;
    results.sort_by_key(|c| c.id);
    let mut r = Report::new("all-acceptance", json!({ "only": ids }));
    for c in &results {
        let defect = if c.passed { Value::Null } else { json!(c.detail) };
        r.checks.push(Check::new(format!("criterion {}: {}", c.id, c.title), c.passed, defect));
    }
    r.result = Value::Array(
        results
            .iter()
            .map(|c| json!({ "id": c.id, "title": c.title, "status": report::status(c.passed), "detail": c.detail }))
            .collect(),
    );
    Ok(r)
}
