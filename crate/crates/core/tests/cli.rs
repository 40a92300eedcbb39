//! The `decomp` binary end to end: output formats and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use decomp::cli::SystemFile;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const QUADRICS: &str = r#"{"n": 2, "polynomials": [
    {"support": [[0, 0], [1, 0], [0, 1], [1, 1]], "coefficients": [[1, 0], [2, 0], [-1, 0.5], [3, 0]]},
    {"support": [[0, 0], [2, 0], [0, 2]], "coefficients": [[-1, 0], [1, 0], [1, 1]]}]}"#;

#[test]
fn mv_and_analyze() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "q.json", QUADRICS);
    let o = run(&["mv", &file]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
    let o = run(&["analyze", &file]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("total MV 4"), "{}", stdout(&o));
    let o = run(&["analyze", "--json", &file]);
    let tree: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(tree["mv"], 4);
}

#[test]
fn solve_reports_all_solutions() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "q.json", QUADRICS);
    let o = run(&["solve", "--json", "--seed", "3", &file]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["solutions"].as_array().unwrap().len(), 4);
    assert_eq!(report["seed"], 3);
    assert!(report["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r.as_f64().unwrap() < 1e-8));
}

#[test]
fn start_system_round_trips() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "q.json", QUADRICS);
    let o = run(&["start", "--seed", "4", &file]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let system = SystemFile::parse(&out["system"].to_string()).unwrap();
    assert!(system.has_coefficients());
    assert_eq!(out["solutions"].as_array().unwrap().len(), 4);
    let again = write(&dir, "g.json", &system.to_json());
    assert_eq!(stdout(&run(&["mv", &again])).trim(), "4");
}

#[test]
fn structural_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let collinear = write(
        &dir,
        "z.json",
        r#"{"n": 2, "polynomials": [{"support": [[0, 0], [1, 1]]}, {"support": [[0, 0], [2, 2]]}]}"#,
    );
    let o = run(&["analyze", &collinear]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("mixed volume is zero"),
        "{}",
        stderr(&o)
    );
    let o = run(&["solve", &collinear]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("coefficients required"));
    let broken = write(&dir, "b.json", "{\"n\": 2,\n \"polynomials\": [");
    let o = run(&["mv", &broken]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let o = run(&[
        "mv",
        Path::new("/nonexistent/system.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_solutions_exit_two() {
    // Parallel lines: mixed volume 1, no solutions at all.
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "p.json",
        r#"{"n": 2, "polynomials": [
            {"support": [[0, 0], [1, 0], [0, 1]], "coefficients": [[1, 0], [1, 0], [1, 0]]},
            {"support": [[0, 0], [1, 0], [0, 1]], "coefficients": [[2, 0], [1, 0], [1, 0]]}]}"#,
    );
    let o = run(&["solve", &file]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 of 1 solutions"), "{}", stdout(&o));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let o = run(&[
        "bench",
        "--family",
        "e-basis",
        "--count",
        "2",
        "--no-blackbox",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("instance_id,mv,paths_dec,paths_bb,time_dec_ms,time_bb_ms,status")
    );
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1], "50");
        assert_eq!(fields[2], "64");
        assert_eq!(fields[6], "ok");
    }
    assert!(stderr(&o).starts_with("mv  count"));
}
