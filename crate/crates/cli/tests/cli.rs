use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kempe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kempe")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses a CSV body into its header and numeric-or-text rows.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (header, rows) = table(text);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn spread(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[test]
fn invariants_of_presets() {
    let o = kempe(&["invariants", "--preset", "ghz"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!((column(&out, "i5")[0] - 0.25).abs() < 1e-12);
    assert!((column(&out, "tau3")[0] - 1.0).abs() < 1e-12);
    assert!(out.trim_end().ends_with("GHZ"));

    let o = kempe(&["invariants", "--preset", "w", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["tangles"]["i5"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-12);
    assert_eq!(v["class"], "W");
}

#[test]
fn malformed_state_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]").unwrap();
    let o = kempe(&["invariants", "--state", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected 8 amplitudes"));

    let good = dir.path().join("ghz.json");
    std::fs::write(&good, "[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]").unwrap();
    let o = kempe(&["invariants", "--state", good.to_str().unwrap()]);
    assert!(o.status.success());
    assert!((column(&stdout(&o), "i5")[0] - 0.25).abs() < 1e-12);
}

#[test]
fn input_errors() {
    assert_eq!(kempe(&["invariants"]).status.code(), Some(2));
    assert_eq!(kempe(&["invariants", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(kempe(&["invariants", "--preset", "psi_alpha"]).status.code(), Some(2));
    assert_eq!(kempe(&["scatter", "--ensemble", "nope"]).status.code(), Some(2));
    assert_eq!(kempe(&["scatter", "--points", "0"]).status.code(), Some(2));
    assert_eq!(kempe(&["fuzz", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(kempe(&["--format", "xml", "conformance"]).status.code(), Some(2));
}

#[test]
fn family_sweep_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("family.csv");
    let o = kempe(&["family", "--alpha", "3.141592653589793", "--points", "200", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(table(&csv).1.len(), 200);
    for name in ["tau3", "c12", "c13", "c23"] {
        assert!(spread(&column(&csv, name)) < 1e-7, "{name}");
    }
    assert!(spread(&column(&csv, "i5")) > 1e-3);

    let sidecar = Path::new(&format!("{}.interval.json", out.display())).to_path_buf();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(sidecar).unwrap()).unwrap();
    let (lo, hi) = (v["interval"]["lo"].as_f64().unwrap(), v["interval"]["hi"].as_f64().unwrap());
    assert!((lo - 1.0 / 5f64.sqrt()).abs() < 1e-6 && (hi - 0.5).abs() < 1e-6);
    assert_eq!(v["interval"]["constraints_log"].as_array().unwrap().len(), 5);
}

#[test]
fn family_degenerate_and_invalid_targets() {
    let o = kempe(&["family", "--tau3", "1", "--c12", "0", "--c13", "0", "--c23", "0", "--points", "10", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let width = v["interval"]["hi"].as_f64().unwrap() - v["interval"]["lo"].as_f64().unwrap();
    assert!(width < 1e-5);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);

    let zero = kempe(&["family", "--tau3", "0", "--c12", "0", "--c13", "0", "--c23", "0"]);
    assert_eq!(zero.status.code(), Some(2));
    let empty = kempe(&["family", "--tau3", "0.5", "--c12", "0.5", "--c13", "0.5", "--c23", "0.9"]);
    assert_eq!(empty.status.code(), Some(4));
    assert_eq!(kempe(&["family", "--tau3", "0.5"]).status.code(), Some(2));
}

#[test]
fn scatter_is_reproducible_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_kempe"))
            .args(["scatter", "--ensemble", "haar", "--points", "300", "--seed", "7"])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let text = String::from_utf8(one).unwrap();
    assert!(text.starts_with("index,tau3,i5,c12,c13,c23,class\n"));
    assert_eq!(text.lines().count(), 301);
    assert_ne!(stdout(&kempe(&["scatter", "--ensemble", "haar", "--points", "300", "--seed", "8"])), text);
}

#[test]
fn scatter_w_class_stays_at_zero_threetangle() {
    let o = kempe(&["scatter", "--ensemble", "w_class", "--points", "500"]);
    let out = stdout(&o);
    assert!(column(&out, "tau3").iter().all(|&t| t < 1e-8));
    assert!(column(&out, "i5").iter().all(|&i| i >= 2.0 / 9.0 - 1e-9));
}

#[test]
fn fuzz_reports_margins() {
    let o = kempe(&["fuzz", "--trials", "40", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 40);
    assert_eq!(rows[0]["seed"], 42);
    assert!(String::from_utf8_lossy(&o.stderr).contains("min margin"));
}

#[test]
fn orbit_scan_keeps_norm_and_threetangle() {
    let o = kempe(&["orbit", "--preset", "psi_alpha", "--alpha", "3.141592653589793", "--points", "50"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(table(&out).1.len(), 100);
    assert!(column(&out, "norm").iter().all(|n| (n - 1.0).abs() < 1e-9));
    assert!(spread(&column(&out, "tau3")) < 1e-9);
    assert!(spread(&column(&out, "c12")) < 1e-9);
    let low = kempe(&["orbit", "--preset", "psi_alpha", "--alpha", "1", "--t-max", "0.1"]);
    assert_eq!(low.status.code(), Some(2));
    // GHZ: 1 - 4 l1^2 (l2^2 + l4^2) = 0, no admissible orbit
    assert_eq!(kempe(&["orbit", "--preset", "ghz"]).status.code(), Some(3));
}

#[test]
fn acin_of_a_preset() {
    let o = kempe(&["acin", "--preset", "ghz", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((v["params"]["l1"].as_f64().unwrap() - h).abs() < 1e-9);
    assert!((v["params"]["l4"].as_f64().unwrap() - h).abs() < 1e-9);
    assert!(v["params"]["l0"].as_f64().unwrap() < 1e-9);
}

#[test]
fn conformance_report_is_json() {
    let o = kempe(&["conformance"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v.as_array().unwrap();
    let find = |claim: &str| entries.iter().find(|e| e["claim"] == claim).unwrap();
    assert_eq!(find("I5(GHZ)")["agree"], true);
    assert_eq!(find("I5(W)")["agree"], true);
    let tau3 = find("tau3(psi_alpha), alpha = pi");
    assert_eq!(tau3["paper_value"].as_f64().unwrap(), 0.32);
    assert_eq!(tau3["agree"], false);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = kempe(&["conformance", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().starts_with("claim,paper_value,computed_value,agree"));
}
