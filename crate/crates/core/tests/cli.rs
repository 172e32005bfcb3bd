// Copyright 2026 The qubound Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qubound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qubound"))
        .args(args)
        .env_remove("QUBOUND_MAX_DIM")
        .output()
        .expect("spawn qubound")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const PLUS_INSTANCE: &str = r#"{
  "rho": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[0,0]]},
  "projectors": [{"rows": 2, "cols": 2, "data": [[0.5,0],[0.5,0],[0.5,0],[0.5,0]]}]
}"#;

const MIXED_INSTANCE: &str = r#"{
  "rho": {"rows": 2, "cols": 2, "data": [[0.75,0],[0,0],[0,0],[0.25,0]]},
  "projectors": [{"rows": 2, "cols": 2, "data": [[0.5,0],[0.5,0],[0.5,0],[0.5,0]]}]
}"#;

#[test]
fn verify_small_run_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = qubound(&["verify", "--trials", "200", "--scan-vectors", "5", "--scan-grid", "500", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read(&out);
    assert_eq!(v["tool"], "qubound");
    assert_eq!(v["result"]["totalViolations"], 0);
    assert_eq!(v["result"]["bounds"].as_array().unwrap().len(), 10);
}

#[test]
fn verify_is_deterministic_apart_from_timestamp() {
    let run = || {
        let o = qubound(&["--seed", "3", "verify", "--trials", "100", "--bounds", "T1A,SEN", "--scan-vectors", "3"]);
        assert_eq!(code(&o), 0);
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn forced_violations_exit_with_reproduction_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    // A negative tolerance demands slack the bound cannot give.
    let o = qubound(&["hunt", "--bound", "T1A", "--trials", "20", "--tol=-10", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 5, "{}", String::from_utf8_lossy(&o.stderr));
    let repro = dir.path().join("h.json.repro.json");
    assert!(repro.exists());
    let r = read(&repro);
    assert_eq!(r["seed"], 42);
    assert!(!r.to_string().is_empty());
}

#[test]
fn angles_on_plus_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", PLUS_INSTANCE);
    let o = qubound(&["angles", &inst]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["result"];
    let q = std::f64::consts::FRAC_PI_4;
    for key in ["theta", "alpha", "beta"] {
        assert!((r[key][0].as_f64().unwrap() - q).abs() < 1e-12, "{key}");
    }
    assert!(r["gamma"][0].as_f64().unwrap().abs() < 1e-7);
    assert!((r["success"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((r["traceDistance"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let csv = qubound(&["--format", "csv", "angles", &inst]);
    assert_eq!(code(&csv), 0);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("step,"));
}

#[test]
fn angles_on_mixed_instance_needs_purify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "m.json", MIXED_INSTANCE);
    let o = qubound(&["angles", &inst]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--purify"));
    let o = qubound(&["angles", "--purify", &inst]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn malformed_json_names_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "bad.json", "{\n  \"rho\": [1, 2,\n");
    let o = qubound(&["angles", &inst]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json") && err.contains("line"), "{err}");
}

#[test]
fn non_idempotent_projector_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "np.json", &PLUS_INSTANCE.replace("[[0.5,0],[0.5,0],[0.5,0],[0.5,0]]", "[[0.5,0],[0,0],[0,0],[0.5,0]]"));
    let o = qubound(&["angles", &inst]);
    assert_eq!(code(&o), 3);
}

#[test]
fn missing_file_and_bad_flags_are_usage_errors() {
    assert_eq!(code(&qubound(&["angles", "/nonexistent/instance.json"])), 2);
    assert_eq!(code(&qubound(&["verify", "--no-such-flag"])), 2);
    assert_eq!(code(&qubound(&["hunt", "--bound", "NOT_A_BOUND", "--trials", "1"])), 3);
}

#[test]
fn resource_cap_exit_code() {
    let o = Command::new(env!("CARGO_BIN_EXE_qubound"))
        .args(["verify", "--trials", "1"])
        .env("QUBOUND_MAX_DIM", "16")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn zeno_reports_closed_form() {
    let o = qubound(&["zeno", "--n", "10", "--eps-max", "0.01"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["result"];
    assert!(r["closedFormError"].as_f64().unwrap() < 1e-12);
    assert!((r["equiangular"]["success"].as_f64().unwrap() - 0.7805460697811408).abs() < 1e-12);
    assert!(r["zenoFamily"]["success"].as_f64().is_some());
}

#[test]
fn decode_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.csv");
    let summary = dir.path().join("summary.json");
    let o = qubound(&[
        "--trials", "40", "--out", rows.to_str().unwrap(),
        "decode", "--n", "6", "--summary", summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&rows).unwrap();
    assert_eq!(text.lines().count(), 41);
    let s = read(&summary);
    assert_eq!(s["result"]["trials"], 40);
    assert!(s["result"]["boundRHS_paper"].as_f64().is_some());
    assert!(s["result"]["boundRHS_sen"].as_f64().is_some());
}

#[test]
fn decode_warns_when_rate_exceeds_alphabet() {
    let o = qubound(&["--trials", "5", "decode", "--n", "4", "--rate", "1.5", "--delta", "0.3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("warning"));
}

#[test]
fn decode_rejects_bad_mode() {
    assert_eq!(code(&qubound(&["--trials", "2", "decode", "--mode", "psychic"])), 3);
}
