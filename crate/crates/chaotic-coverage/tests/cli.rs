//! End-to-end checks of the command-line interface.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chaotic-coverage"))
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const SMALL_SCENARIO: &str = r#"{
  "format_version": 1,
  "name": "cli-small",
  "world": {
    "width": 20.0,
    "height": 20.0,
    "sensing_range": 1.0,
    "start": [0.5, 0.5],
    "obstacles": [[[8.0, 8.0], [12.0, 12.0]]]
  },
  "planner": { "dc": 0.2 },
  "baseline": false
}"#;

const OPEN_SCENARIO: &str = r#"{
  "format_version": 1,
  "name": "cli-open",
  "world": {
    "width": 20.0,
    "height": 20.0,
    "sensing_range": 1.0,
    "start": [0.5, 0.5]
  },
  "planner": { "dc": 0.3 },
  "baseline": true
}"#;

#[test]
fn run_subcommand_writes_artifacts_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "small.json", SMALL_SCENARIO);
    let out = dir.path().join("out");
    let status = bin()
        .args(["run"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .arg("--plot")
        .status()
        .unwrap();
    assert!(status.success());
    for file in ["summary.json", "trajectory.csv", "coverage.csv", "plot.svg"] {
        assert!(out.join(file).exists(), "{file} missing");
    }

    // The plot subcommand reproduces the figure from the CSV.
    let figure = dir.path().join("replot.svg");
    let status = bin()
        .args(["plot"])
        .arg(out.join("trajectory.csv"))
        .arg(&scenario)
        .arg("-o")
        .arg(&figure)
        .status()
        .unwrap();
    assert!(status.success());
    let svg = fs::read_to_string(&figure).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn validation_failures_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SMALL_SCENARIO.replace("\"dc\": 0.2", "\"dc\": 1.5");
    let scenario = write_scenario(dir.path(), "bad.json", &bad);
    let output = bin().args(["run"]).arg(&scenario).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("planner.dc"), "stderr: {stderr}");
}

#[test]
fn runtime_failures_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    // A fixed-point transit map state with zoning enabled fails at run time.
    let broken = SMALL_SCENARIO.replace(
        "\"planner\": { \"dc\": 0.2 }",
        "\"planner\": { \"dc\": 0.9, \"zoning_enabled\": true, \"c\": 1.0, \"logistic_ic\": 0.75 }",
    );
    let scenario = write_scenario(dir.path(), "broken.json", &broken);
    let out = dir.path().join("out");
    let output = bin()
        .args(["run"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    // The failure is still recorded in the summary.
    let summary = fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("\"status\": \"error\""));
}

#[test]
fn baseline_subcommand_prints_t_opt_and_pr() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "open.json", OPEN_SCENARIO);
    let output = bin().args(["baseline"]).arg(&scenario).output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("T_opt"), "stdout: {stdout}");
    assert!(stdout.contains("PR"), "stdout: {stdout}");
}

#[test]
fn sweep_subcommand_writes_ranked_table() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = format!(
        r#"{{
  "format_version": 1,
  "base": {OPEN_SCENARIO},
  "axes": {{ "ds_index_init": [1, 2, 3] }}
}}"#
    );
    let spec = write_scenario(dir.path(), "sweep.json", &sweep);
    let out = dir.path().join("sweep_out");
    let status = bin()
        .args(["sweep"])
        .arg(&spec)
        .arg("--out")
        .arg(&out)
        .arg("--jobs")
        .arg("2")
        .status()
        .unwrap();
    assert!(status.success());
    let table = fs::read_to_string(out.join("ranked.csv")).unwrap();
    assert_eq!(table.lines().count(), 4, "header plus three rows: {table}");
    assert!(table.starts_with("rank,name,"));
}
