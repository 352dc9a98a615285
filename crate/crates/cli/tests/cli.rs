use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const COMPASS: &str = r#"{"weights": [["0", "1/4", "0"], ["1/8", "0", "1/2"], ["0", "1/8", "0"]]}"#;
const SIMPLE: &str = r#"{"weights": [["0", "1/4", "0"], ["1/4", "0", "1/4"], ["0", "1/4", "0"]]}"#;
const ORDER3_GRID: &str = "0,0,1/4;1/4,0,0;0,1/2,0";
const INFINITE_GRID: &str = "0,0,1/4;1/4,0,0;0,1/4,1/4";

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().unwrap()
}

fn qwalk_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compass_file_has_group_order_four() {
    let f = file(COMPASS);
    let r = json(&qwalk(&["classify", f.path().to_str().unwrap(), "--format", "json"]));
    assert_eq!(r["group_order"], 4);
    assert_eq!(r["omega3_order"], 2);
    assert_eq!(r["Y"], "0");
    assert_eq!(r["detP"], "0");
    assert_eq!(r["on_curve"], true);
}

#[test]
fn simple_walk_is_degenerate_without_group_order() {
    let f = file(SIMPLE);
    let r = json(&qwalk(&["classify", f.path().to_str().unwrap(), "--format", "json"]));
    assert_eq!(r["genus"], "zero-degenerate");
    assert_eq!(r["verdict"], "degenerate");
    assert!(r.get("group_order").is_none());
    assert_eq!(r["g2"], "1/192");
    assert_eq!(r["g3"], "1/13824");
    assert_eq!(r["disc"], "0");
}

#[test]
fn stdin_input() {
    let r = json(&qwalk_stdin(&["classify", "-", "--format", "json"], COMPASS));
    assert_eq!(r["group_order"], 4);
}

#[test]
fn text_is_default_format() {
    let out = qwalk(&["classify", "--grid", ORDER3_GRID]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("|H|") && l.trim_end().ends_with('6')), "{text}");
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let out = qwalk(&["classify", "--grid", "0,1/0,0;1/4,0,1/4;0,1/4,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_json_is_a_parse_error() {
    let f = file(r#"{"weights": [["0", "1"]]}"#);
    assert_eq!(qwalk(&["classify", f.path().to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn unnormalized_input_needs_the_flag() {
    let grid = "0,2,0;1,0,4;0,1,0";
    assert_eq!(qwalk(&["classify", "--grid", grid]).status.code(), Some(1));
    let r = json(&qwalk(&["classify", "--grid", grid, "--normalize", "--format", "json"]));
    assert_eq!(r["group_order"], 4);
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent.json");
    assert_eq!(qwalk(&["classify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(qwalk(&["classify", "--bogus"]).status.code(), Some(1));
    assert_eq!(qwalk(&[]).status.code(), Some(1));
    assert_eq!(qwalk(&["scan", "--support", "0101"]).status.code(), Some(1));
    assert_eq!(qwalk(&["scan", "--denominator-max", "0"]).status.code(), Some(1));
    assert_eq!(qwalk(&["--help"]).status.code(), Some(0));
    assert_eq!(qwalk(&["--version"]).status.code(), Some(0));
}

#[test]
fn oracle_agrees_on_compass() {
    let f = file(COMPASS);
    let r = json(&qwalk(&["classify", f.path().to_str().unwrap(), "--oracle", "--format", "json"]));
    assert_eq!(r["oracle"]["closure"], "2");
    assert_eq!(r["oracle"]["agrees"], true);
}

#[test]
fn yellowbook_flag_adds_order8_determinant() {
    let plain = json(&qwalk(&["classify", "--grid", ORDER3_GRID, "--format", "json"]));
    assert!(plain["criteria"].get("yellowbook_order8_det").is_none());
    let with = json(&qwalk(&["classify", "--grid", ORDER3_GRID, "--yellowbook", "--format", "json"]));
    assert!(with["criteria"]["yellowbook_order8_det"].is_string());
}

#[test]
fn orbit_of_order_four_instance_ends_on_line_two() {
    let f = file(COMPASS);
    let out = qwalk(&["orbit", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0].trim(), "1  (5/96, 0)");
    assert_eq!(lines[1].trim(), "2  O");
}

#[test]
fn orbit_first_line_is_omega3() {
    let r = json(&qwalk(&["classify", "--grid", INFINITE_GRID, "--format", "json"]));
    let lines = json(&qwalk(&["orbit", "--grid", INFINITE_GRID, "--format", "json"]));
    assert_eq!(lines[0]["x"], r["X"]);
    assert_eq!(lines[0]["y"], r["Y"]);
}

#[test]
fn orbit_of_infinite_instance_has_twelve_affine_lines() {
    let lines = json(&qwalk(&["orbit", "--grid", INFINITE_GRID, "--format", "json"]));
    let lines = lines.as_array().unwrap();
    assert_eq!(lines.len(), 12);
    assert!(lines.iter().all(|l| l["identity"] == false));
}

#[test]
fn orbit_rejects_degenerate_instance() {
    let f = file(SIMPLE);
    assert_eq!(qwalk(&["orbit", f.path().to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn compass_scan_is_all_order_four() {
    let r = json(&qwalk(&[
        "scan",
        "--support",
        "compass",
        "--denominator-max",
        "4",
        "--format",
        "json",
    ]));
    assert_eq!(r["examined"], 256);
    let hist = r["histogram"].as_array().unwrap();
    let finite: Vec<&str> = hist
        .iter()
        .map(|e| e[0].as_str().unwrap())
        .filter(|b| b.starts_with("|H|"))
        .collect();
    assert_eq!(finite, ["|H| = 4"]);
}

#[test]
fn full_scan_hits_are_verified() {
    let r = json(&qwalk(&[
        "scan",
        "--denominator-max",
        "2",
        "--target-order",
        "4",
        "--oracle",
        "--format",
        "json",
    ]));
    let hits = r["hits"].as_array().unwrap();
    assert!(!hits.is_empty());
    for h in hits {
        assert_eq!(h["multiples_verified"], true);
        assert_eq!(h["report"]["group_order"], 4);
        assert!(h["report"]["oracle"].is_object());
    }
}

#[test]
fn scan_hits_reclassify_to_the_same_verdict() {
    let r = json(&qwalk(&["scan", "--denominator-max", "2", "--target-order", "4", "--format", "json"]));
    for h in r["hits"].as_array().unwrap().iter().take(5) {
        let weights = &h["report"]["weights"];
        let f = file(&serde_json::json!({ "weights": weights }).to_string());
        let again = json(&qwalk(&["classify", f.path().to_str().unwrap(), "--format", "json"]));
        assert_eq!(again, h["report"]);
    }
}

#[test]
fn empty_scan() {
    let r = json(&qwalk(&["scan", "--limit", "0", "--format", "json"]));
    assert_eq!(r["examined"], 0);
    assert!(r["histogram"].as_array().unwrap().is_empty());
}

#[test]
fn scan_output_is_deterministic() {
    let args = ["scan", "--denominator-max", "4", "--limit", "300", "--seed", "11", "--target-order", "4"];
    let a = qwalk(&[&args[..], &["--jobs", "1"]].concat());
    let b = qwalk(&[&args[..], &["--jobs", "4"]].concat());
    let c = qwalk(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
}
