//! End-to-end runs of the `csfmcw` binary: exit codes and output formats.

use std::path::Path;
use std::process::{Command, Output};

fn csfmcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csfmcw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn synth_then_estimate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "scene.json",
        r#"{"scene": {"explicit": [{"range_m": 50.0, "velocity_mps": 0.0, "aoa_rad": 0.0, "gain": [1.0, 0.0]}]},
            "experiment": {"snr_db": null}}"#,
    );
    let cube = dir.path().join("cube.bin");
    let cube = cube.to_str().unwrap();
    let s = csfmcw(&["synth", "--config", &cfg, "--seed", "3", "--out", cube]);
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stderr));
    let scene: serde_json::Value = serde_json::from_str(&stdout(&s)).unwrap();
    assert_eq!(scene["targets"].as_array().unwrap().len(), 1);

    let e = csfmcw(&["estimate", cube, "--config", &cfg, "--seed", "3"]);
    assert_eq!(e.status.code(), Some(0), "{}", String::from_utf8_lossy(&e.stderr));
    let text = stdout(&e);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("range_m,velocity_mps,aoa_deg,amplitude"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(!rows.is_empty());
    let best = rows.iter().max_by(|a, b| a[3].total_cmp(&b[3])).unwrap();
    assert!((best[0] - 50.0).abs() <= 0.6, "range {}", best[0]);
    assert!(best[1].abs() <= 1.0, "velocity {}", best[1]);
    assert!(best[2].abs() <= 2.0, "angle {}", best[2]);
}

#[test]
fn synth_without_out_is_config_error() {
    assert_eq!(csfmcw(&["synth"]).status.code(), Some(1));
}

#[test]
fn missing_cube_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.bin");
    let o = csfmcw(&["estimate", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corrupt_cube_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.bin");
    std::fs::write(&p, b"not a cube").unwrap();
    assert_eq!(csfmcw(&["estimate", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "a.json", r#"{"waveform": {"carrier_hz": 24e9}}"#);
    assert_eq!(csfmcw(&["grids", "--config", &unknown]).status.code(), Some(1));
    let nested = write_config(dir.path(), "b.json", r#"{"guarantees": {"draws": 5}}"#);
    assert_eq!(csfmcw(&["guarantees", "--config", &nested]).status.code(), Some(1));
    let bad_value = write_config(dir.path(), "c.json", r#"{"chirps": {"transmitted": 64}}"#);
    assert_eq!(
        csfmcw(&["bench", "--config", &bad_value, "--runs", "1"]).status.code(),
        Some(1)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        csfmcw(&["grids", "--config", missing.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(csfmcw(&["grids", "--threads", "0"]).status.code(), Some(1));
    assert_eq!(csfmcw(&["bench", "--methods", "nope"]).status.code(), Some(1));
    assert_eq!(csfmcw(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn grids_lists_every_point() {
    let o = csfmcw(&["grids"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# kind index value"));
    let count = |kind: &str| text.lines().filter(|l| l.starts_with(&format!("{kind} "))).count();
    assert_eq!(count("range"), 991);
    assert_eq!(count("velocity"), 200);
    assert_eq!(count("angle"), 50);
    let last_angle: f64 = text
        .lines()
        .filter(|l| l.starts_with("angle "))
        .last()
        .unwrap()
        .split(' ')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((last_angle - 30.0).abs() < 1e-9);
}

#[test]
fn guarantees_prints_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "g.json",
        r#"{"grids": {"mode": "guarantee", "velocity_mps": [-78.125, 73.2421875], "sin_angle": [-1.0, 1.0],
                      "range": {"min_m": 1.2, "max_m": 120.0, "step_m": 0.12}},
            "guarantees": {"gram_draws": 200, "tail_draws": 200}}"#,
    );
    let o = csfmcw(&["guarantees", "--config", &cfg, "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["bounds"]["uniform"]["p_min"], 31);
}

#[test]
fn bench_writes_csv_per_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = csfmcw(&[
        "bench",
        "--runs",
        "2",
        "--threads",
        "1",
        "--methods",
        "twod-omp,classical-dft",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csfmcw::bench::read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.runs == 2));
}

#[test]
fn roc_reports_auc() {
    let o = csfmcw(&["roc", "--runs", "2", "--thresholds", "0.2,0.5,0.8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# method omp-binary auc "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn calib_writes_one_row_per_cell() {
    let o = csfmcw(&[
        "calib",
        "--runs",
        "1",
        "--sigma-theta-deg",
        "0,2",
        "--sigma-r",
        "0.1",
        "--methods",
        "twod-omp",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csfmcw::bench::read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 2);
}
