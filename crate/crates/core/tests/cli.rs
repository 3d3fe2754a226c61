use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restricted-series")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rs_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const ZERO_ONE: &str = "[[0,0],[1,0]]";

#[test]
fn approximate_then_verify() {
    let out = bin(&[
        "approximate", "--lambda", ZERO_ONE, "--zeta", "turns:0.1414", "--target", "[2,1]", "--eps", "0.05",
        "--region", "disk:0.95,0.1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = json(&out);
    assert_eq!(cert["epsilon"], 0.05);
    let path = tmp("cert.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let v = bin(&["verify", "--certificate-file", path.to_str().unwrap(), "--lambda", ZERO_ONE, "--zeta", "turns:0.1414"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["valid"], true);

    // tampering with the claimed error is caught
    let mut bad = cert.clone();
    bad["epsilon"] = Value::from(1e-6);
    let path = tmp("tampered.json");
    std::fs::write(&path, bad.to_string()).unwrap();
    let v = bin(&["verify", "--certificate-file", path.to_str().unwrap(), "--lambda", ZERO_ONE, "--zeta", "turns:0.1414"]);
    assert_eq!(v.status.code(), Some(2));
    assert_eq!(json(&v)["valid"], false);
}

#[test]
fn auto_dispatch_and_trace() {
    let trace = tmp("trace.json");
    let out = bin(&[
        "approximate", "--lambda", "[[0,0],[1,0],[0,1]]", "--zeta", "turns:1/2 exact", "--target", "[1,2]",
        "--eps", "0.2", "--trace", trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["theorem"], 2);
}

#[test]
fn hypothesis_failures_exit_2() {
    let out = bin(&["approximate", "--theorem", "3", "--lambda", "[[0,0],[1,0],[0,1]]", "--zeta", "turns:0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["reason"], "half-plane-contained");

    let out = bin(&["approximate", "--lambda", ZERO_ONE, "--zeta", "turns:1/2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["reason"], "line-contained");
}

#[test]
fn malformed_input_exits_64() {
    for args in [
        vec!["approximate", "--lambda", "[[0,0]", "--zeta", "turns:0.2"],
        vec!["approximate", "--lambda", ZERO_ONE, "--zeta", "0.2"],
        vec!["approximate", "--lambda", ZERO_ONE, "--zeta", "turns:0.2", "--region", "blob:1"],
        vec!["approximate", "--lambda", ZERO_ONE, "--zeta", "turns:0.2", "--theorem", "7"],
        vec!["frobnicate"],
        vec!["wedge", "--k", "3", "--alpha", "0.1"],
    ] {
        let out = bin(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn classify_wedge_oracle() {
    let out = bin(&["classify", "--lambda", "[[1,0],[0,1],[-1,0],[0,-1]]"]);
    assert_eq!(json(&out)["kind"], "spanning");
    let out = bin(&["wedge", "--k", "3"]);
    assert_eq!(json(&out)["k"], 3);
    let out = bin(&["wedge", "--k", "3", "--alpha", "0.05", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out).get("r_hat").is_some());
    let out = bin(&["oracle", "--lambda", ZERO_ONE, "--tau", "[0.5,0]", "--target", "[1.875,0]", "--length", "4"]);
    let v = json(&out);
    assert_eq!(v["best_error"], 0.0);
    assert_eq!(v["evaluated_count"], 16);
}

#[test]
fn seeded_commands_are_reproducible() {
    let ev = ["check-evasion", "--lambda", "[[1,0]]", "--k", "2", "--trials", "50", "--seed", "3", "--z-samples", "10"];
    let a = bin(&ev);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, bin(&ev).stdout);
    assert_eq!(json(&a)["pass"], true);

    let csv = tmp("samples.csv");
    let s = [
        "sample", "--lambda", ZERO_ONE, "--zeta", "turns:0.1414", "--trials", "300", "--seed", "5", "--grid",
        "0,0,3,30", "--csv", csv.to_str().unwrap(),
    ];
    let a = bin(&s);
    assert_eq!(a.status.code(), Some(0));
    let first = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(first.lines().count(), 301);
    assert_eq!(a.stdout, bin(&s).stdout);
    assert_eq!(first, std::fs::read_to_string(&csv).unwrap());
}
