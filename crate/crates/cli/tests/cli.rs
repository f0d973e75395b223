use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirrorpair"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn num(v: &serde_json::Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn identity_demo_has_zero_cost() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["demo", "identity", "--cells", "4", "--out", "p.json"]);
    ok(dir, &["--quiet", "solve", "p.json", "--type", "a", "--out", "sol"]);
    let s = summary(&dir.join("sol"));
    let design = &s["designs"][0];
    assert_eq!(num(&design["cost"]), 0.0);
    let expected = num(&s["mass"]) * num(&s["beta"]) / 2.0;
    assert!((num(&design["functional_f"]) - expected).abs() <= 1e-12);
    ok(dir, &["--quiet", "verify", "sol"]);
}

#[test]
fn both_types_are_ordered_and_verified() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["demo", "shift", "--cells", "4", "--out", "p.json"]);
    ok(dir, &["--quiet", "solve", "p.json", "--type", "both"]);
    let s = summary(&dir.join("solution"));
    assert!(num(&s["cost_a"]) <= num(&s["cost_b"]));
    let report = ok(dir, &["--json", "verify", "solution", "--random-plans", "20"]);
    let report: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(report["all_passed"], serde_json::Value::Bool(true));
    assert!(dir.join("solution/report.json").exists());
}

#[test]
fn missing_problem_exits_with_io_code() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["solve", "absent.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.json"));
}

#[test]
fn unknown_demo_lists_the_names() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["demo", "spiral"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["identity", "shift", "stretch1d", "gaussian2d"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn tampered_height_fails_verification() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["demo", "gaussian2d", "--cells", "4", "--out", "p.json"]);
    ok(dir, &["--quiet", "solve", "p.json", "--type", "a"]);
    let path = dir.join("solution/pair_a.json");
    let mut pair: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let w = &mut pair["omega"][3];
    *w = serde_json::json!(w.as_f64().unwrap() + 0.05);
    fs::write(&path, serde_json::to_string(&pair).unwrap()).unwrap();
    let out = run(dir, &["--quiet", "verify", "solution"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn refinement_residuals_decrease() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["demo", "gaussian2d", "--out", "p.json"]);
    ok(dir, &["--quiet", "solve", "p.json", "--type", "a"]);
    let report = ok(dir, &["--json", "verify", "solution", "--refinements", "3", "--random-plans", "10"]);
    let report: serde_json::Value = serde_json::from_str(&report).unwrap();
    let r: Vec<f64> = report["monge_ampere_residuals"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(r.len(), 3);
    assert!(r.windows(2).all(|w| w[1] <= w[0]), "{r:?}");
}

#[test]
fn refinements_need_an_analytic_problem() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("p.json"),
        r#"{"format_version": 1, "dimension": 1, "beta": 1.0,
            "source": {"points": [{"coords": [0], "weight": 1}, {"coords": [1], "weight": 1}]},
            "target": {"points": [{"coords": [0.5], "weight": 2}]}}"#,
    )
    .unwrap();
    ok(dir, &["--quiet", "solve", "p.json"]);
    let out = run(dir, &["--quiet", "verify", "solution", "--refinements", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["demo", "stretch1d", "--cells", "16", "--out", "p.json"]);
    for out in ["one", "two"] {
        ok(dir, &["--quiet", "solve", "p.json", "--type", "both", "--out", out]);
        ok(dir, &["--quiet", "verify", out, "--seed", "7"]);
    }
    let mut names: Vec<_> = fs::read_dir(dir.join("one")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 9);
    for name in names {
        let a = fs::read(dir.join("one").join(&name)).unwrap();
        let b = fs::read(dir.join("two").join(&name)).unwrap();
        assert!(a == b, "{name:?} differs");
    }
}
