use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

use interval_transfer::lawrence_sullivan::{uvw_coalgebra, Uvw};
use interval_transfer::scalar;
use interval_transfer::tensor::Word;
use interval_transfer::Vector;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Runs `itx` and returns (exit code, parsed stdout, raw stdout).
fn itx(args: &[&str]) -> (i32, Value, String) {
    let out = Command::cargo_bin("itx").unwrap().args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let code = out.status.code().unwrap();
    let json = if text.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
    };
    (code, json, text)
}

fn itx_file(args: &[&str], files: &[(&str, &str)]) -> (i32, Value, String) {
    let mut owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    for (flag, name) in files {
        owned.push(flag.to_string());
        owned.push(data(name).to_str().unwrap().to_string());
    }
    let refs: Vec<&str> = owned.iter().map(|s| s.as_str()).collect();
    itx(&refs)
}

fn stderr_of(args: &[&str]) -> (i32, String) {
    let out = Command::cargo_bin("itx").unwrap().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

/// Every `coeff` and numeric string in the output parses as an exact rational.
fn all_coefficients_exact(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.iter().all(|(k, x)| match (k.as_str(), x) {
            ("coeff", Value::String(s)) => scalar::parse(s).is_ok(),
            ("coeff", _) => false,
            _ => all_coefficients_exact(x),
        }),
        Value::Array(a) => a.iter().all(all_coefficients_exact),
        Value::Number(n) => n.is_i64() || n.is_u64(),
        _ => true,
    }
}

#[test]
fn bernoulli_table_up_to_eight() {
    let (code, v, _) = itx(&["bernoulli", "--max", "8"]);
    assert_eq!(code, 0);
    let want = ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30"];
    let got: Vec<&str> = v["result"]["values"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(got, want);
    assert_eq!(v["status"], "pass");
}

#[test]
fn stabilized_transfer_matches_golden_file() {
    let expected = std::fs::read_to_string(golden("transfer_uvw_arity4.json")).unwrap();
    let (code, _, text) = itx(&["transfer", "--max-arity", "4", "--stabilized", "--pretty"]);
    assert_eq!(code, 0);
    assert_eq!(text, expected);
    let (code, compact, _) = itx(&["transfer", "--max-arity", "4", "--stabilized"]);
    assert_eq!(code, 0);
    assert_eq!(compact, serde_json::from_str::<Value>(&expected).unwrap());
}

#[test]
fn golden_file_is_the_closed_form_structure() {
    let g: Value = serde_json::from_str(&std::fs::read_to_string(golden("transfer_uvw_arity4.json")).unwrap()).unwrap();
    let closed = uvw_coalgebra(4).unwrap();
    let mut seen = 0;
    for op in g["result"]["operations"].as_array().unwrap() {
        let x = Uvw::parse(op["element"].as_str().unwrap()).unwrap();
        let k = op["arity"].as_u64().unwrap() as usize;
        let mut v = Vector::zero();
        for t in op["terms"].as_array().unwrap() {
            let w: Vec<Uvw> = t["word"].as_array().unwrap().iter().map(|s| Uvw::parse(s.as_str().unwrap()).unwrap()).collect();
            v.add_term(Word::new(w).unwrap(), scalar::parse(t["coeff"].as_str().unwrap()).unwrap());
        }
        use interval_transfer::ainf::AInfCoalgebra;
        assert_eq!(v, closed.delta(k, &x).unwrap(), "δ_{k}({x:?})");
        seen += 1;
    }
    assert_eq!(seen, closed.entries().count());
}

#[test]
fn output_is_deterministic_and_exact() {
    let args = ["transfer", "--max-arity", "5", "--cells"];
    let (_, v, a) = itx(&args);
    let (_, _, b) = itx(&args);
    assert_eq!(a, b);
    assert!(all_coefficients_exact(&v));
    let (_, v, _) = itx(&["decorate", "--cell", "01", "--arity", "4"]);
    assert!(all_coefficients_exact(&v));
}

#[test]
fn level_transfer_agrees_with_stabilized() {
    let (_, a, _) = itx(&["transfer", "--max-arity", "4", "--level", "7"]);
    let (_, b, _) = itx(&["transfer", "--max-arity", "4", "--stabilized"]);
    assert_eq!(a["result"], b["result"]);
    let (code, _) = stderr_of(&["transfer", "--max-arity", "4", "--level", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn retract_check_passes() {
    let (code, v, _) = itx(&["retract-check", "--level", "4", "--max-index", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dual_elements_checked"], 26);
}

#[test]
fn coherence_of_builtins_and_files() {
    let (code, _, _) = itx(&["coherence", "--max-arity", "5"]);
    assert_eq!(code, 0);
    let (code, v, _) = itx_file(&["coherence", "--max-arity", "3"], &[("--input", "broken_coalgebra.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["defect"][0]["element"], "w");
}

#[test]
fn transfer_output_feeds_coherence() {
    let (_, v, _) = itx(&["transfer", "--max-arity", "6"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uvw.json");
    std::fs::write(&path, v["result"].to_string()).unwrap();
    let (code, v, _) = itx(&["coherence", "--max-arity", "6", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn ls_differential_squares_to_zero() {
    let (code, v, _) = itx(&["ls", "--max-weight", "5"]);
    assert_eq!(code, 0);
    let dz = v["result"]["differential"]["z"].as_array().unwrap();
    assert!(dz.iter().any(|t| t["basis"] == "[z,[z,a]]" && t["coeff"] == "-1/12"));
}

#[test]
fn maurer_cartan_checks() {
    let (code, _, _) = itx_file(&["mc-check"], &[("--algebra", "mc_example.json"), ("--element", "mc_solution.json")]);
    assert_eq!(code, 0);
    let (code, v, _) = itx_file(&["mc-check"], &[("--algebra", "mc_example.json"), ("--element", "a.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["defect"]["c"], "3/2");
    let (code, _, _) = itx_file(&["mc-check"], &[("--algebra", "ternary.json"), ("--element", "ternary_solution.json")]);
    assert_eq!(code, 0);
}

#[test]
fn gauge_flow_endpoint() {
    let (code, v, _) = itx_file(
        &["gauge-flow", "--truncation", "5"],
        &[("--algebra", "nilpotent3.json"), ("--alpha0", "a.json"), ("--x", "x.json")],
    );
    assert_eq!(code, 0);
    let want: Value = serde_json::from_str(&std::fs::read_to_string(data("endpoint.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["endpoint"], want);
}

#[test]
fn quillen_check_from_flow_and_from_file() {
    let (code, _, _) = itx_file(
        &["quillen-check", "--truncation", "4"],
        &[("--algebra", "nilpotent3.json"), ("--alpha0", "a.json"), ("--x", "x.json")],
    );
    assert_eq!(code, 0);
    let (code, v, _) = itx_file(&["quillen-check"], &[("--algebra", "nilpotent3.json"), ("--beta", "beta_bad.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][1]["status"], "fail");
    assert_eq!(v["checks"][2]["status"], "pass");
}

#[test]
fn cylinder_check_with_gauge_endpoint() {
    let files = |xi| {
        [
            ("--algebra", "nilpotent3.json"),
            ("--alpha0", "a.json"),
            ("--alpha1", "endpoint.json"),
            ("--xi", xi),
        ]
    };
    let (code, _, _) = itx_file(&["cylinder-check", "--cap", "4"], &files("minus_x.json"));
    assert_eq!(code, 0);
    let (code, v, _) = itx_file(&["cylinder-check", "--cap", "4"], &files("x.json"));
    assert_eq!(code, 1);
    assert_eq!(v["checks"][2]["defect"]["b"], "-2");
}

#[test]
fn lxy_defects() {
    let base = [("--x", "dual_numbers.json"), ("--y", "dual_numbers.json")];
    let (code, _, _) = itx_file(&["lxy-defect", "--caps", "3,3,3"], &[base[0], base[1], ("--phi", "identity_phi.json")]);
    assert_eq!(code, 0);
    let (code, v, _) = itx_file(&["lxy-defect", "--caps", "3,3,3"], &[base[0], base[1], ("--phi", "broken_phi.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["status"], "fail");
    assert_eq!(v["checks"][2]["status"], "pass");
    let (code, _, _) = itx_file(&["lxy-defect", "--caps", "3,3"], &[base[0], base[1], ("--phi", "identity_phi.json")]);
    assert_eq!(code, 2);
}

#[test]
fn decorate_one_insertion() {
    let (code, v, _) = itx(&["decorate", "--cell", "01", "--arity", "3", "--level", "5"]);
    assert_eq!(code, 0);
    let terms = v["result"].as_array().unwrap();
    assert_eq!(terms.len(), 12);
    let c = |w: [&str; 3]| terms.iter().find(|t| t["word"] == serde_json::json!(w)).unwrap()["coeff"].clone();
    assert_eq!(c(["0", "1", "01"]), "1/6");
    assert_eq!(c(["01", "1", "1"]), "1/3");
    let (code, _) = stderr_of(&["decorate", "--cell", "2", "--arity", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_two() {
    let (code, err) = stderr_of(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, err) = stderr_of(&["mc-check", "--algebra", "/nonexistent.json", "--element", "x.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("input error"));
    let (code, _, _) = itx_file(&["mc-check"], &[("--algebra", "mc_example.json"), ("--element", "x.json")]);
    assert_eq!(code, 2);
    let (code, _, _) = itx_file(&["mc-check"], &[("--algebra", "a.json"), ("--element", "a.json")]);
    assert_eq!(code, 2);
}

#[test]
fn timing_is_opt_in() {
    let (_, v, _) = itx(&["bernoulli", "--max", "3"]);
    assert!(v.get("wall_time_s").is_none());
    let (_, v, _) = itx(&["bernoulli", "--max", "3", "--timing"]);
    assert!(v.get("wall_time_s").is_some());
}

#[test]
fn all_acceptance_passes() {
    let (code, v, _) = itx(&["all-acceptance"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["checks"].as_array().unwrap().len(), 9);
    let (code, v, _) = itx(&["all-acceptance", "--only", "2,8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"][1]["id"], 8);
    let (code, _) = stderr_of(&["all-acceptance", "--only", "10"]);
    assert_eq!(code, 2);
}
