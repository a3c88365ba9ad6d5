use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_metaconverse"))
}

fn instance(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn close(v: &Value, want: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() < 1e-9
}

#[test]
fn solve_ternary_reports_the_np_point() {
    let path = instance("ternary.json");
    let r = json(&run(&["solve", path.to_str().unwrap()]));
    assert!(close(&r["exact"], 0.6));
    assert!(close(&r["gamma_np"], 1.2));
    assert!(close(&r["p"], 1.0));
    assert!(close(&r["at_qy"]["alpha_form"], 0.6));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn solve_uses_qy_from_file() {
    let path = instance("ternary.json");
    let r = json(&run(&["solve", path.to_str().unwrap(), "--qy", "file"]));
    assert_eq!(r["qy_choice"], "file");
    assert!(close(&r["qy"][0], 0.5));
    assert!(r["at_qy"]["alpha_form"].as_f64().unwrap() <= 0.6 + 1e-9);
}

#[test]
fn solve_two_observation_decoder_fields() {
    let path = instance("two_observation.json");
    let r = json(&run(&["solve", path.to_str().unwrap()]));
    assert!((r["exact"].as_f64().unwrap() - 0.592).abs() < 5e-4);
    assert!(close(&r["theorem2_eps1"], 1.0 / 3.0));
    assert!(close(&r["theorem2_alpha"], 0.6));
    assert!(close(&r["metric_auxiliary_alpha"], 0.6));
}

#[test]
fn lossy_demo_four_symbol() {
    let path = instance("lossy_four_symbol.json");
    let r = json(&run(&["lossy-demo", path.to_str().unwrap()]));
    assert!(close(&r["excess_distortion"], 0.3));
    assert!(close(&r["theorem3_exact"], 0.3));
    assert!(close(&r["kostina_relaxation"], 0.3));
}

#[test]
fn malformed_json_exits_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"pvy\": [[0.5, 0.5],\n").unwrap();
    let out = run(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_measure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sum.json");
    std::fs::write(&path, r#"{"pvy": [[0.5, 0.6]]}"#).unwrap();
    assert_eq!(run(&["solve", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn oversized_search_exits_two() {
    let out = run(&["bsc-fig2", "--n-max", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let out = run(&["fig1", "--gamma-grid", "20", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = run(&["fig1", "--gamma-grid", "20"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn check_passes_on_a_small_seed() {
    let out = run(&["check", "--seed", "3", "--instances", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("FAILED"));
}
