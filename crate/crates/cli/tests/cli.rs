use std::process::{Command, Output};

use serde_json::Value;

fn fqalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = fqalg(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn prob_m22_exhaustive() {
    let v = json(&["prob", "M(2,1,2)", "--mode", "exhaustive"]);
    assert_eq!(v["value"], "3/8");
    assert_eq!(v["method"], "exhaustive");
    assert_eq!(v["seed"], "0");
}

#[test]
fn prob_nilpotent_pairs() {
    let v = json(&[
        "prob",
        "M(2,1,2)",
        "--condition",
        "nilpotent",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(v["value"], "3/8");
}

#[test]
fn zeta_closed_form() {
    // 2^-3 + 2^-6 + 2^-8
    let v = json(&["zeta", "M(2,3,2)", "--eps", "1"]);
    assert_eq!(v["value"], "37/256");
}

#[test]
fn zeta_of_field_is_zero() {
    let v = json(&["zeta", "M(1,1,3)"]);
    assert_eq!(v["value"], "0");
}

#[test]
fn count_units_gl2() {
    let v = json(&["count", "M(2,1,2)", "--what", "units"]);
    assert_eq!(v["value"], "6");
}

#[test]
fn dgen_values() {
    assert_eq!(json(&["dgen", "M(2,1,2)"])["value"], 2);
    assert_eq!(json(&["dgen", "M(1,1,2)"])["value"], 0);
}

#[test]
fn range_expansion_emits_array() {
    let v = json(&["dgen", "M(2..3,1,2)"]);
    assert_eq!(v.as_array().map(Vec::len), Some(2));
}

#[test]
fn expect_m22_is_exact() {
    let v = json(&["expect", "M(2,1,2)"]);
    assert_eq!(v["value"], "10/3");
}

#[test]
fn parse_error_exits_2() {
    let out = fqalg(&["prob", "bogus("]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "parse");
}

#[test]
fn too_large_exits_3() {
    let out = fqalg(&["prob", "M(5,1,3)", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "too_large");
}

#[test]
fn indeterminate_exits_4() {
    let out = fqalg(&["pfg", "M(2,1,2)", "--eta", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn monte_carlo_is_deterministic_across_workers() {
    let base = [
        "prob",
        "M(3,1,2)",
        "--mode",
        "mc",
        "--samples",
        "3000",
        "--seed",
        "7",
    ];
    let a = fqalg(&[&base[..], &["--workers", "1"]].concat());
    let b = fqalg(&[&base[..], &["--workers", "4"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_header() {
    let out = fqalg(&["prob", "M(2,1,2)", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("spec,op,condition,d,value,ci_low,ci_high,samples,seed,method")
    );
}

#[test]
fn verify_minp_passes() {
    let out = fqalg(&["verify", "minP", "--spec", "M(2,1,2)"]);
    assert!(out.status.success());
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(fqalg(&["verify", "nosuch"]).status.code(), Some(2));
}
