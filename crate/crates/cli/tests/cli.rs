//! End-to-end checks of the `isv` binary: output surfaces, JSON schema,
//! exit-code contract, and seed reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn isv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn degree_six_two() {
    let out = isv(&["degree", "--g", "6", "--gp", "2"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("deg <= 3"), "{s}");
    assert!(s.contains("deg <= 5"), "{s}");
}

#[test]
fn regular_g2_volume() {
    let out = isv(&["regular", "--g", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3.225995135"));
}

#[test]
fn regular_requires_exactly_one_parameter() {
    let out = isv(&["regular"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isv(&["regular", "--g", "2", "--ell", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_m2_fixture() {
    let out = isv(&["analyze", &fixture("m2.tri")]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("one-edge family: true (g = 2)"), "{s}");
    assert!(s.contains("ideal simplicial volume: exactly 2"), "{s}");
    assert!(s.contains("verified true"), "{s}");
}

#[test]
fn analyze_json_schema() {
    let out = isv(&["analyze", &fixture("fig8.tri"), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("single JSON object");
    assert_eq!(v["tets"], 2);
    assert_eq!(v["vertex_classes"], 1);
    assert_eq!(v["edge_classes"], 2);
    assert_eq!(v["orientable"], true);
    assert_eq!(v["is_mg"], false);
    assert_eq!(v["euler_characteristic"], "0");
    assert_eq!(v["homology_ranks"][3], 1);
    assert_eq!(v["cycle"]["l1_norm"], "2");
    assert_eq!(v["cycle"]["verified"], true);
    assert_eq!(v["links"][0]["euler_char"], 0);
}

#[test]
fn analyze_gieseking_has_no_cycle() {
    let out = isv(&["analyze", &fixture("gieseking.tri"), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["orientable"], false);
    assert_eq!(v["cycle"], serde_json::Value::Null);
    assert_eq!(v["homology_ranks"][3], 0);
}

#[test]
fn bounds_cusped_exact_two() {
    let v3 = 1.014941606409654_f64;
    let vol = format!("{}", 2.0 * v3);
    let out = isv(&["bounds", "--kind", "cusped", "--volume", &vol, "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let exact = v["exact"].as_f64().unwrap();
    assert!((exact - 2.0).abs() < 1e-6);
}

#[test]
fn bounds_missing_field_is_domain_error() {
    let out = isv(&["bounds", "--kind", "mg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty(), "no stdout on failure");
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let out = isv(&["nosuchcommand"]);
    assert_eq!(out.status.code(), Some(2));
    let out = isv(&["degree", "--g", "6", "--gp", "2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_domain_error() {
    let out = isv(&["analyze", "/nonexistent/path.tri"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn vl_json_and_reproducibility() {
    let args = [
        "vl", "--ell", "0.9", "--restarts", "2", "--seed", "11", "--json",
    ];
    let a = isv(&args);
    assert!(a.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["best_volume"].is_f64());
    assert!(v["feasible"].is_boolean());
    assert_eq!(v["label"], "heuristic");
    assert_eq!(v["seed"], 11);
    let b = isv(&args);
    assert_eq!(stdout(&a), stdout(&b), "same seed must reproduce bit-identically");
}
