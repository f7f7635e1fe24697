//! End-to-end runs of the `slitherkit` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slitherkit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in [
        "rot", "classify", "verify", "probe", "fuchsian", "model", "z", "triple", "current", "render", "verify-all",
    ] {
        assert!(text.lines().any(|l| l.trim_start().starts_with(cmd)), "{cmd} missing from\n{text}");
    }
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn rotation_and_classification() {
    let dir = TempDir::new().unwrap();
    let rot = write(dir.path(), "r.json", r#"{"type":"rotation","theta":"2/7"}"#);
    let out = run(&["rot", &rot]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["enclosure"]["rational"], serde_json::json!([2, 7]));
    let pl = write(dir.path(), "p.json", r#"{"type":"pl","breaks":[[0,0],["1/2","3/4"]]}"#);
    assert_eq!(json(&run(&["classify", &pl]))["class"], "space-like");
}

#[test]
fn commutator_bound_passes_and_rejects_a_non_central_c() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", r#"{"type":"pl","breaks":[[0,0],[0.3,0.6],[0.7,0.8]]}"#);
    let b = write(dir.path(), "b.json", r#"{"type":"pl","breaks":[[0.1,-0.2],[0.5,0.45]]}"#);
    let z = write(dir.path(), "z.json", r#"{"type":"rotation","theta":1}"#);
    let out = run(&["verify", "commutator-bound", &a, &b, &z]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["max_displacement"].as_f64().unwrap() < 2.0);
    // a rotation by 1/2 does not commute with a
    let half = write(dir.path(), "h.json", r#"{"type":"rotation","theta":"1/2"}"#);
    assert_eq!(run(&["verify", "commutator-bound", &a, &b, &half]).status.code(), Some(65));
}

#[test]
fn genus_two_pipeline() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("g2.json");
    let rep = rep.to_str().unwrap();
    let out = run(&["fuchsian", "genus2", "--emit", rep]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["relator_winding"], 2);

    let mw = run(&["verify", "milnor-wood", rep, "--pairs", "a1,b1", "a2,b2"]);
    assert_eq!(mw.status.code(), Some(0));
    let v = json(&mw);
    let (lo, hi) = (v["product"]["lo"].as_f64().unwrap(), v["product"]["hi"].as_f64().unwrap());
    assert!(lo <= 2.0 && 2.0 <= hi, "{lo} {hi}");

    let probe = run(&["probe", "convergence", rep, "--max-len", "6"]);
    assert_eq!(probe.status.code(), Some(0));
    assert_eq!(json(&probe)["stabilized"], true);

    let from_file = json(&run(&["current", "intersect", rep, "--mu", "a1", "--nu", "b1", "--depth", "4"]));
    let built_in = json(&run(&["current", "intersect", "genus2", "--mu", "a1", "--nu", "b1", "--depth", "4"]));
    assert_eq!(from_file["value"], 1.0);
    assert_eq!(from_file["value"], built_in["value"]);
    let weighted = json(&run(&["current", "intersect", "genus2", "--mu", "a1*2,a2", "--nu", "b1", "--depth", "4"]));
    assert_eq!(weighted["value"], 2.0);

    let act = json(&run(&["triple", "act", rep, "a1 A1", "--triple", "0.1,0.4,0.7"]));
    for (k, x) in [("u", 0.1), ("s", 0.4), ("p", 0.7)] {
        assert!((act["image"][k].as_f64().unwrap() - x).abs() < 1e-12);
    }
}

#[test]
fn irrational_rotation_probe_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let rep = write(
        dir.path(),
        "rot.json",
        r#"{"generators":{"a":{"type":"rotation","theta":0.00618034}},"relators":[]}"#,
    );
    let out = run(&["probe", "convergence", &rep, "--max-len", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["stabilized"], false);
}

#[test]
fn milnor_wood_report_round_trip_and_corruption() {
    let dir = TempDir::new().unwrap();
    let out = run(&["verify", "milnor-wood", "--random", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = write(dir.path(), "report.json", std::str::from_utf8(&out.stdout).unwrap());
    let again = run(&["verify", "milnor-wood", "--from-report", &report]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["consistent_with_recorded_status"], true);

    let mut v = json(&out);
    v["pairs"][3]["commutator"]["lo"] = 1.6.into();
    v["pairs"][3]["commutator"]["hi"] = 1.7.into();
    let bad = write(dir.path(), "bad.json", &v.to_string());
    let checked = run(&["verify", "milnor-wood", "--from-report", &bad]);
    assert_eq!(checked.status.code(), Some(1));
    assert_eq!(json(&checked)["consistent_with_recorded_status"], false);
}

#[test]
fn models_and_z() {
    let torus = run(&["model", "torus", "--verify"]);
    assert_eq!(torus.status.code(), Some(0));
    assert_eq!(json(&torus)["z_diameter"], 2);
    assert_eq!(run(&["model", "tangent-bundle", "--group", "genus2", "--verify"]).status.code(), Some(0));
    assert_eq!(json(&run(&["z", "0", "1"]))["z"], 2);
    assert_eq!(json(&run(&["z", "0.5", "-0.25"]))["z"], -1);
    let anosov = json(&run(&["probe", "uniformity", "--model", "anosov", "--budget", "20"]));
    assert!((anosov["growth_rate"].as_f64().unwrap() - 2.618_033_988_75).abs() < 1e-6);
    assert_eq!(json(&run(&["probe", "uniformity", "--model", "torus"]))["bounded"], true);
}

#[test]
fn flow_triple_units() {
    let one = json(&run(&["triple", "flow", "--point", "0,0", "--dir", "0"]));
    assert_eq!(one["triple"]["u"], 0.5);
    assert_eq!(one["triple"]["p"], 1.25);
    let rad = json(&run(&["triple", "flow", "--point", "0,0", "--dir", "0", "--period-2pi"]));
    assert!((rad["triple"]["u"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn current_subcommands() {
    let g = json(&run(&["current", "growth", "--matrix", "2,1,1,1", "--seed", "1,1"]));
    assert!((g["factor"].as_f64().unwrap() - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    let e = json(&run(&["current", "eigen", "--matrix", "2,1,1,1", "--N", "40"]));
    assert_eq!(e["n"], 40);
    let l = json(&run(&["current", "linking", "--matrix", "2,1,1,1", "--mu", "1,0", "--nu", "0,1", "--window", "-4,4"]));
    assert_eq!(l["coefficients"]["0"]["exact"], "1");
    assert_eq!(l["coefficients"]["2"]["exact"], "2");
    assert_eq!(l["coefficients"]["-2"]["exact"], "1");
    assert_eq!(run(&["current", "growth", "--matrix", "2,1,1"]).status.code(), Some(65));
}

#[test]
fn render_writes_the_requested_leaves() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.svg");
    let status = run(&["render", "torus-foliation", "--leaves", "9", "--seed", "4", "-o", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<path").count(), 11);
    assert_eq!(run(&["render", "no-such-figure", "-o", out.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn verify_all_with_manifest() {
    let dir = TempDir::new().unwrap();
    let manifest = write(dir.path(), "m.json", r#"{"criteria": [5, 4]}"#);
    let out = run(&["verify-all", &manifest]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ids: Vec<u64> = v["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![5, 4]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("criterion 5 PASS") && err.contains("criterion 4 PASS"), "{err}");
    let bad = write(dir.path(), "bad.json", r#"{"criteria": [10]}"#);
    assert_eq!(run(&["verify-all", &bad]).status.code(), Some(65));
}
