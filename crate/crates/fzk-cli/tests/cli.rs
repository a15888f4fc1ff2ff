//! End-to-end runs of the compiled binary: every subcommand's happy path,
//! plus the exit-code contract for bad input, guard trips, and I/O failure.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PROBLEM_JSON: &str = r#"{
  "alpha": 1.0,
  "a": "1",
  "b3": "1/8",
  "bm": "1/8",
  "p": 2, "q": 2, "r": 2,
  "initial": "(4/3)*rho*sinh(x+y)^2",
  "params": { "rho": 0.001 },
  "reference": "(4/3)*rho*sinh(x+y-rho*t)^2"
}"#;

fn write_problem(dir: &Path) -> PathBuf {
    let path = dir.join("problem.json");
    std::fs::write(&path, PROBLEM_JSON).unwrap();
    path
}

fn fzk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fzk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs()
}

#[test]
fn solve_reports_the_published_point() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out = fzk(&[
        "solve",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "pia",
        "--order",
        "3",
        "--alpha",
        "0.67",
        "--at",
        "0.1,0.1,0.2",
    ]);
    let value = stdout_json(&out);
    assert_eq!(value["method"], "pia");
    assert_eq!(value["order"], 3);
    assert_eq!(value["alpha"], 0.67);
    assert!(close(value["value"].as_f64().unwrap(), 5.31854e-5, 1e-3));
}

#[test]
fn solve_csv_carries_the_same_value() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let base = [
        "solve",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "rpsm",
        "--alpha",
        "0.75",
        "--at",
        "0.6,0.6,0.3",
    ];
    let json = stdout_json(&fzk(&base));
    let mut args = base.to_vec();
    args.extend(["--format", "csv"]);
    let out = fzk(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,order,alpha,x,y,t,value"));
    let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(cells[0], "rpsm");
    let value: f64 = cells[6].parse().unwrap();
    assert_eq!(value, json["value"].as_f64().unwrap());
    assert!(close(value, 2.93780e-3, 1e-3));
}

#[test]
fn table_is_deterministic_and_matches_published_rows() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out_path = dir.path().join("table.csv");
    let args = [
        "table",
        "--problem",
        problem.to_str().unwrap(),
        "--order",
        "3",
        "--diag",
        "--out",
        out_path.to_str().unwrap(),
    ];
    assert!(fzk(&args).status.success());
    let first = std::fs::read_to_string(&out_path).unwrap();
    assert!(fzk(&args).status.success());
    let second = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(first, second);

    let stdout_run = fzk(&args[..args.len() - 2]);
    assert_eq!(first, String::from_utf8(stdout_run.stdout).unwrap());

    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(
        lines[0],
        "x,y,t,pia_0.67,rpsm_0.67,pia_0.75,rpsm_0.75,pia_1,rpsm_1,reference,pia_error,rpsm_error"
    );
    let row: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(&row[..3], &[0.1, 0.1, 0.2]);
    assert!(close(row[3], 5.31854e-5, 1e-3));
    assert!(close(row[4], 5.31244e-5, 1e-3));
    assert!(close(row[7], 5.35536e-5, 2e-5));
    assert!(close(row[8], 5.35536e-5, 2e-5));
    assert!(close(row[9], 5.39388e-5, 1e-5));
    assert!(close(row[10], 3.85217e-7, 1e-3));
    assert!(close(row[11], 3.85217e-7, 1e-3));
}

#[test]
fn coeffs_dumps_the_series_terms() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out = fzk(&[
        "coeffs",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "rpsm",
        "--order",
        "2",
    ]);
    let value = stdout_json(&out);
    assert_eq!(value["method"], "rpsm");
    let terms = value["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[0]["exponent"][1], 0);
    assert_eq!(terms[1]["exponent"][1], 1);
    assert!(terms[1]["parts"][0]["gamma"]
        .as_str()
        .unwrap()
        .contains("gamma"));
}

#[test]
fn surface_samples_the_reference_grid() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out_path = dir.path().join("surface.csv");
    let out = fzk(&[
        "surface",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "reference",
        "--t",
        "0",
        "--range",
        "0:1:3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "x,y,u");
    let last: Vec<f64> = lines[9].split(',').map(|c| c.parse().unwrap()).collect();
    let expected = (4.0 / 3.0) * 0.001 * f64::sinh(2.0).powi(2);
    assert!(close(last[2], expected, 1e-5));
}

#[test]
fn residual_evaluates_series_and_reference() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let series = stdout_json(&fzk(&[
        "residual",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "rpsm",
        "--order",
        "3",
        "--at",
        "0.1,0.1,0.2",
    ]));
    let reference = stdout_json(&fzk(&[
        "residual",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "reference",
        "--at",
        "0.1,0.1,0.2",
    ]));
    let w: f64 = 0.1 + 0.1 - 0.001 * 0.2;
    let rho2 = 0.001f64 * 0.001;
    let closed = (40.0 / 9.0) * rho2 * f64::sinh(4.0 * w) - (44.0 / 9.0) * rho2 * f64::sinh(2.0 * w);
    let reference_value = reference["residual"].as_f64().unwrap();
    assert!(close(reference_value, closed, 1e-10));
    // The series solves its own initial-value problem to high order, so
    // its defect at small t sits far below the travelling wave's O(rho^2)
    // defect.
    let series_value = series["residual"].as_f64().unwrap();
    assert!(series_value.is_finite());
    assert!(
        series_value.abs() < 1e-3 * reference_value.abs(),
        "{series_value} vs {reference_value}"
    );
}

#[test]
fn missing_problem_file_exits_two() {
    let out = fzk(&[
        "solve",
        "--problem",
        "/nonexistent/problem.json",
        "--method",
        "pia",
        "--at",
        "0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_problem_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = fzk(&[
        "solve",
        "--problem",
        path.to_str().unwrap(),
        "--method",
        "pia",
        "--at",
        "0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_range_alpha_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    for alpha in ["0", "1.5", "-0.3"] {
        let out = fzk(&[
            "solve",
            "--problem",
            problem.to_str().unwrap(),
            "--method",
            "pia",
            "--alpha",
            alpha,
            "--at",
            "0,0,0",
        ]);
        assert_eq!(out.status.code(), Some(2), "alpha = {alpha}");
    }
}

#[test]
fn fractional_reference_residual_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out = fzk(&[
        "residual",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "reference",
        "--alpha",
        "0.67",
        "--at",
        "0.1,0.1,0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_node_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out = fzk(&[
        "solve",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "pia",
        "--order",
        "3",
        "--at",
        "0.1,0.1,0.2",
        "--node-budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("100"));
}

#[test]
fn unwritable_output_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out = fzk(&[
        "table",
        "--problem",
        problem.to_str().unwrap(),
        "--order",
        "1",
        "--diag",
        "--out",
        "/nonexistent-dir/table.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bad_point_syntax_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path());
    let out = fzk(&[
        "solve",
        "--problem",
        problem.to_str().unwrap(),
        "--method",
        "pia",
        "--at",
        "0.1,0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
