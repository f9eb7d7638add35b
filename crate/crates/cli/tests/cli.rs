//! End-to-end runs of the `qloop` binary: outputs, exit codes and reports.

use std::path::Path;
use std::process::{Command, Output};

use qloop_core::QRat;
use serde_json::{json, Value};
use tempfile::TempDir;

const ORTHOGONAL: &str = r#"{"vertices": ["1", "2"], "d": [[2, 0], [0, 2]]}"#;

fn qloop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qloop"))
        .args(args)
        .env("QLOOP_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn unit() -> Value {
    json!({ "num": [[0, "1"]], "den": [[0, "1"]] })
}

#[test]
fn orthogonal_relation_is_the_commutator() {
    let dir = TempDir::new().unwrap();
    let cartan = write(&dir, "orth.json", ORTHOGONAL);
    let out = qloop(&["--cartan", &cartan, "rho", "gen", "--zigzag", "1,2,0,0,1", "--deg", "-1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let terms = stdout_json(&out)["element"]["terms"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 2);
    let find = |word: Value| terms.iter().find(|t| t["word"] == word).map(|t| t["c"].clone());
    assert_eq!(find(json!(["2:1", "1:1"])), Some(unit()));
    assert_eq!(find(json!(["1:1", "2:1"])), Some(json!({ "num": [[0, "-1"]], "den": [[0, "1"]] })));
    let verify = qloop(&["--cartan", &cartan, "rho", "verify", "--zigzag", "1,2,0,0,1"]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(stdout_json(&verify)["vanishes"], json!(true));
}

#[test]
fn base_pairing_value() {
    let out = qloop(&["pair", "uu", "--left", "1:0", "--right", "1:0"]);
    assert_eq!(out.status.code(), Some(0));
    let want = (&QRat::q_pow(-1) - &QRat::q_pow(1)).recip().unwrap().to_string();
    assert_eq!(stdout_json(&out)["value"], json!(want));
    let mismatch = qloop(&["pair", "uu", "--left", "1:0", "--right", "2:0"]);
    assert_eq!(stdout_json(&mismatch)["value"], json!("0"));
}

#[test]
fn wheel_check_reports_witness() {
    let dir = TempDir::new().unwrap();
    let cartan = write(&dir, "orth.json", ORTHOGONAL);
    let elem = |terms: Value| json!({ "n": { "1": 1, "2": 1 }, "numerator": { "terms": terms } }).to_string();
    let bad = qloop(&[
        "--cartan",
        &cartan,
        "shuffle",
        "wheel-check",
        "--elem",
        &elem(json!([{ "m": {}, "c": 1 }])),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v = stdout_json(&bad);
    assert_eq!(v["wheel"], json!(false));
    assert!(v["witness"].as_str().is_some_and(|w| !w.is_empty()));
    let good_terms = json!([{ "m": { "1.1": 1 }, "c": 1 }, { "m": { "2.1": 1 }, "c": -1 }]);
    let good = qloop(&["--cartan", &cartan, "shuffle", "wheel-check", "--elem", &elem(good_terms)]);
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(stdout_json(&good)["wheel"], json!(true));
}

#[test]
fn straightening_output_reparses() {
    let out = qloop(&["word", "straighten", "--word", "1:1,1:0"]);
    assert_eq!(out.status.code(), Some(0));
    let element = stdout_json(&out)["element"].clone();
    assert_eq!(element["terms"][0]["word"], json!(["1:0", "1:1"]));
    assert_eq!(element["terms"][0]["c"], json!({ "num": [[2, "1"]], "den": [[0, "1"]] }));
    let again = qloop(&["word", "straighten", "--word", &element.to_string()]);
    assert_eq!(stdout_json(&again)["element"], element);
}

#[test]
fn shuffle_output_reparses() {
    let pair = qloop(&["shuffle", "mul", "--left", "1:0", "--right", "2:1"]);
    let product = stdout_json(&pair);
    let chained = qloop(&["shuffle", "mul", "--left", &product.to_string(), "--right", "1:-1"]);
    let direct = qloop(&["shuffle", "mul", "--left", "1:0,2:1", "--right", "1:-1"]);
    assert_eq!(chained.status.code(), Some(0));
    assert_eq!(stdout_json(&chained), stdout_json(&direct));
}

#[test]
fn corrupted_cartan_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "garbage.json", "{\"vertices\": [\"1\", ");
    let out = qloop(&["--cartan", &garbage, "verify", "all"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!String::from_utf8_lossy(&out.stderr).contains("PASS"));
    let positive = write(&dir, "positive.json", r#"{"vertices": ["1", "2"], "d": [[2, 1], [1, 2]]}"#);
    let validated = qloop(&["cartan", "validate", &positive]);
    assert_eq!(validated.status.code(), Some(1));
    assert_eq!(stdout_json(&validated)["valid"], json!(false));
    let missing = qloop(&["--cartan", "/nonexistent/cartan.json", "lead", "--elem", "1:0"]);
    assert_eq!(missing.status.code(), Some(2));
    let malformed = qloop(&["rho", "gen", "--zigzag", "1,2,0", "--deg", "0"]);
    assert_eq!(malformed.status.code(), Some(2));
}

fn run_report(dir: &Path, name: &str, extra: &[&str]) -> (Output, Value) {
    let path = dir.join(name);
    let mut args = vec!["verify", "all", "--report", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = qloop(&args);
    let report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out, report)
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["--only", "A1,A3,A10", "--seed", "11"];
    let (out, first) = run_report(dir.path(), "a.json", &args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first["schema"], json!("qloop-report/1"));
    assert_eq!(first["seed"], json!(11));
    assert_eq!(first["checks"].as_array().unwrap().len(), 3);
    let (_, second) = run_report(dir.path(), "b.json", &args);
    assert_eq!(first, second);
}

#[test]
fn mutation_mode_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let (out, report) = run_report(dir.path(), "mut.json", &["--only", "A2", "--broken-zeta"]);
    assert_eq!(out.status.code(), Some(1));
    let check = &report["checks"][0];
    assert_eq!(check["id"], json!("A2"));
    assert_eq!(check["passed"], json!(false));
    let witness = &check["witness"];
    assert!(witness["zigzag"].is_object());
    assert!(witness["multidegree"].is_array());
    assert!(witness["image"].is_object());
}
