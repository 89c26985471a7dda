use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sextica(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sextica")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("sample.json");
    let cert = dir.path().join("cert.json");
    let out = sextica(&["--seed", "3", "generate", "--family", "Z35", "--out", path(&sample)]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!(c["node_count"], 35);
    assert_eq!(c["verdict"], "obstructed");
    std::fs::write(&cert, &out.stdout).unwrap();

    let out = sextica(&["verify", "--certificate", path(&cert), "--sample", path(&sample)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"], "verified");

    let mut tampered = c.clone();
    tampered["node_count"] = 34.into();
    std::fs::write(&cert, tampered.to_string()).unwrap();
    let out = sextica(&["verify", "--certificate", path(&cert), "--sample", path(&sample)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"], "mismatch");
}

#[test]
fn cohomology_of_a_sample() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("sample.json");
    assert!(sextica(&["generate", "--family", "Z32", "--out", path(&sample)]).status.success());
    let out = sextica(&["cohomology", "--sample", path(&sample), "--iw5"]);
    let v = json(&out);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(24), Some(0)));
    let v = json(&sextica(&["cohomology", "--sample", path(&sample), "--sheaf", "F", "--twist", "-1"]));
    assert_eq!(v["h2"], 12);
}

#[test]
fn defect_from_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    let line: Vec<[u64; 4]> = (1..=10).map(|t| [t, 2 * t + 1, 1, 0]).collect();
    std::fs::write(&pts, serde_json::to_string(&line).unwrap()).unwrap();
    let v = json(&sextica(&["defect", "--points", path(&pts), "--N", "5"]));
    assert_eq!(v["defect"], 4);
    assert_eq!(v["method"], "evaluation");
}

#[test]
fn ideal_commands_on_a_sample() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("sample.json");
    assert!(sextica(&["generate", "--family", "Z31", "--out", path(&sample)]).status.success());
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&sample).unwrap()).unwrap();
    let w = dir.path().join("w.json");
    let sing = dir.path().join("sing.json");
    std::fs::write(&w, s["w"].to_string()).unwrap();
    std::fs::write(&sing, s["sing"].to_string()).unwrap();
    assert_eq!(json(&sextica(&["ideal", "degree", "--ideal", path(&w)]))["degree"], 31);
    assert_eq!(json(&sextica(&["ideal", "equal", "--left", path(&w), "--right", path(&sing)]))["equal"], true);
    let v = json(&sextica(&["ideal", "hilbert", "--ideal", path(&w), "--upto", "6"]));
    assert_eq!(v["hilbert_function"][6], 31);
    assert_eq!(json(&sextica(&["defect", "--ideal", path(&w)]))["defect"], 0);
}

#[test]
fn bundles_and_codes() {
    let v = json(&sextica(&["bundles", "enumerate", "--json"]));
    let surviving: Vec<_> = v.as_array().unwrap().iter().filter(|c| c["status"] == "surviving").collect();
    assert!(!surviving.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.json");
    std::fs::write(&code, r#"{"ambient":4,"generators":[[0,1],[1,2,3]]}"#).unwrap();
    assert_eq!(json(&sextica(&["codes", "dim", "--code", path(&code)]))["dim"], 2);
    assert_eq!(json(&sextica(&["codes", "minimal", "--code", path(&code), "--set", "0,1"]))["minimal"], true);
    assert_eq!(json(&sextica(&["codes", "bound", "--code-dim", "1", "--defect-sing", "3"]))["t2_lower"], 0);
}

#[test]
fn certify_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = sextica(&[
        "certify", "--family", "A24", "--seeds", "2", "--primes", "32003,65537", "--report", "md", "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("report.md")).unwrap();
    assert_eq!(report.lines().filter(|l| l.starts_with("| A24")).count(), 4);
    assert!(dir.path().join("A24-1-65537/certificate.json").exists());
    assert!(dir.path().join("A24-1-65537/sample.json").exists());
}

#[test]
fn bad_input_fails() {
    let out = sextica(&["defect", "--points", "/nonexistent.json"]);
    assert!(!out.status.success());
    assert!(!sextica(&["generate", "--family", "Z99"]).status.success());
}
