use std::process::{Command, Output};

use cliffverify::verify::counterexample_function;
use cliffverify::{MVPolynomial, VarGroup};
use serde_json::Value;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cliffverify"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn strip_times(mut v: Value) -> Value {
    for r in v["reports"].as_array_mut().unwrap() {
        r["wall_time_ms"] = Value::from(0);
    }
    v
}

#[test]
fn counterexample_passes() {
    let out = run(&["check", "counterexample", "--m", "4"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["reports"][0]["id"], "counterexample/m4");
    assert_eq!(v["reports"][0]["residual"]["nonzero_terms"], 0);
}

#[test]
fn counterexample_rejects_small_m() {
    let out = run(&["check", "counterexample", "--m", "2"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m >= 3"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["check", "stokes", "--theorem", "tkstar", "--m", "3", "--k", "1", "--seed", "5"];
    let a = strip_times(json(&run(&args, &[])));
    let b = strip_times(json(&run(&args, &[])));
    assert_eq!(a, b);
    assert_eq!(a["all_pass"], true);
}

#[test]
fn seed_from_environment() {
    let args = ["check", "conformal", "--m", "3", "--k", "1"];
    let a = json(&run(&args, &[("CLIFFVERIFY_SEED", "1")]));
    let b = json(&run(&args, &[("CLIFFVERIFY_SEED", "2")]));
    assert_eq!(b["config"]["seed"], 2);
    assert_ne!(a["reports"][0]["inputs_digest"], b["reports"][0]["inputs_digest"]);
    assert_eq!(a["all_pass"], b["all_pass"]);
}

#[test]
fn mutated_constant_fails() {
    let out = run(&["check", "almansi", "--m", "3", "--k", "2"], &[("CLIFFVERIFY_MUTATE_PROJECTION", "true")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["all_pass"], false);
}

#[test]
fn reflection_reports_sign() {
    let out = run(&["check", "intertwine", "--map", "reflection", "--m", "3", "--k", "1", "--trials", "1"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let notes = json(&out)["reports"][0]["notes"].to_string();
    assert!(notes.contains("sign -1"));
}

#[test]
fn suite_text_and_out_file() {
    let dir = std::env::temp_dir().join(format!("cliffverify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("suite.txt");
    let out = run(&["suite", "--m", "3", "--k", "0", "--workers", "2", "--format", "text", "--out", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS counterexample/m3")));
    assert!(text.ends_with("0 failed\n"));
}

#[test]
fn dims_and_basis() {
    let v = json(&run(&["dims", "--m", "4", "--k", "2"], &[]));
    assert_eq!(v[0]["harmonic"], 144);
    assert_eq!(v[0]["monogenic"], 96);
    let b = json(&run(&["basis", "--m", "3", "--k", "1", "--kind", "left-monogenic"], &[]));
    assert!(b.is_object());
}

#[test]
fn apply_reads_json() {
    let m = 3;
    let f = &MVPolynomial::var(m, VarGroup::X, 1) * &counterexample_function(m);
    let dir = std::env::temp_dir().join(format!("cliffverify-apply-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.json");
    std::fs::write(&path, serde_json::to_string(&f.to_json()).unwrap()).unwrap();
    let out = run(&["apply", "--op", "rk", "--m", "3", "--k", "1", "--input", path.to_str().unwrap(), "--format", "text"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // f has degree 1 in u, so R_2 rejects it
    let bad = run(&["apply", "--op", "rk", "--m", "3", "--k", "2", "--input", path.to_str().unwrap()], &[]);
    assert_eq!(bad.status.code(), Some(2));
}
