use std::io::Cursor;
use std::process::Command;

use serde_json::Value;

use slk::cli::{parse_matrix, run, EXIT_BUDGET, EXIT_DOMAIN, EXIT_MALFORMED, EXIT_OK};
use slk::linalg::IntMatrix;

fn slk(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("slk").chain(args.iter().copied());
    let code = run(argv, &mut Cursor::new(stdin.as_bytes().to_vec()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = slk(&full, "");
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}")))
}

const PLANE: &str = "1 3 3; 0 1 3; 0 0 1";
const M154: &str = "1 2 1 5; 0 1 0 4; 0 0 1 2; 0 0 0 1";

#[test]
fn matrix_formats() {
    let expected = IntMatrix::from_i64(&[&[1, 3, 3], &[0, 1, 3], &[0, 0, 1]]).unwrap();
    assert_eq!(parse_matrix(PLANE).unwrap(), expected);
    assert_eq!(parse_matrix("1 3 3\n0 1 3\n0 0 1\n").unwrap(), expected);
    assert_eq!(parse_matrix(r#"{"gram": [[1, "3", 3], [0, 1, 3], [0, 0, 1]]}"#).unwrap(), expected);
    assert!(parse_matrix("1 2; 3").is_err());
    assert!(parse_matrix("1 x; 0 1").is_err());
    assert!(parse_matrix("1 2 3; 4 5 6").is_err());
    assert!(parse_matrix("").is_err());
}

#[test]
fn check_reports_invariants() {
    let (code, v) = json(&["check", M154]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["q1"], "0");
    assert_eq!(v["q2"], "0");
    assert_eq!(v["surface_type"], "surface*");
    assert_eq!(v["delta"], "5");
    let (code, out, _) = slk(&["check", "1 1 0; 0 1 0; 0 0 1"], "");
    assert_eq!(code, EXIT_DOMAIN);
    assert!(out.contains("unipotent: no"));
}

#[test]
fn check_identity_and_non_solution() {
    let (code, v) = json(&["check", "1 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["surface_type"], "surface");
    assert_eq!(v["delta"], "0");
    let (code, v) = json(&["check", "1 1 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(v["q1"], "1");
    assert_eq!(v["unipotent"], false);
}

#[test]
fn json_output_round_trips() {
    let word = "s1 s2 s3 s1 s2 s3 s1 s2 s3 s1 s2 s3 s1 s2 s3 s1 s2 s3 S1 S1 S2 S2 S3 S3 S1";
    let (code, v) = json(&["mutate", M154, word]);
    assert_eq!(code, EXIT_OK);
    let text = serde_json::to_string(&v).unwrap();
    let parsed = parse_matrix(&text).unwrap();
    let (_, plain, _) = slk(&["mutate", M154, word], "");
    assert_eq!(parsed, parse_matrix(&plain).unwrap());
    let (code, again) = json(&["mutate", &text, ""]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(again["gram"], v["gram"]);
}

#[test]
fn stdin_input() {
    let (code, out, _) = slk(&["check", "-"], PLANE);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("delta: 9"));
}

#[test]
fn file_input() {
    let path = std::env::temp_dir().join(format!("slk-cli-test-{}.txt", std::process::id()));
    std::fs::write(&path, "1 2 2 4\n0 1 0 2\n0 0 1 2\n0 0 0 1\n").unwrap();
    let (code, v) = json(&["classify", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["class"], "Quadric");
}

#[test]
fn mutate_orders() {
    let (code, out, _) = slk(&["mutate", M154, "s2 s1 S2 s1 e4"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "1 2 4 2; 0 1 3 3; 0 0 1 3; 0 0 0 1");
    let (_, out2, _) = slk(&["mutate", "--display-order", M154, "e4 s1 S2 s1 s2"], "");
    assert_eq!(out, out2);
    let (code, _, err) = slk(&["mutate", M154, "s9x"], "");
    assert_eq!(code, EXIT_MALFORMED);
    assert!(err.starts_with("error:"));
    let (code, _, _) = slk(&["mutate", M154, "e7"], "");
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn classify_json() {
    let (code, v) = json(&["classify", M154]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["class"], "NumBlowup");
    assert_eq!(v["n"], "2");
    assert_eq!(v["delta"], "5");
    assert_eq!(v["s_parity"], false);
    assert_eq!(v["canonical"][0][1], "2");
    let (_, v) = json(&["classify", "1 0 0; 0 1 0; 0 0 1"]);
    assert_eq!(v["class"], "Trivial");
    assert!(v["note"].is_string());
    let (code, _, _) = slk(&["classify", "1 1 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1"], "");
    assert_eq!(code, EXIT_DOMAIN);
    let (code, _, _) = slk(&["classify", "1 0; 1 1"], "");
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn enumerate_counts() {
    let (code, out, _) = slk(&["enumerate", "2"], "");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 9);
    assert!(out.ends_with("# total: 9\n"));
    let (_, v) = json(&["enumerate", "3", "--classify"]);
    assert_eq!(v["total"], "153");
    assert_eq!(v["histogram"]["Trivial"], "1");
}

#[test]
fn orbit_found_and_budget() {
    let (code, out, _) = slk(&["orbit", M154, "1 2 4 2; 0 1 3 3; 0 0 1 3; 0 0 0 1"], "");
    assert_eq!(code, EXIT_OK);
    assert!(!out.trim().is_empty());
    let (code, _, _) = slk(&["orbit", "1 2 2 4; 0 1 0 2; 0 0 1 2; 0 0 0 1", M154, "--budget", "500"], "");
    assert_eq!(code, EXIT_BUDGET);
}

#[test]
fn blowup_and_blowdown() {
    let (code, v) = json(&["blowup", PLANE, "2 -2 2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["delta"], "5");
    assert_eq!(v["gram"][0], serde_json::json!(["1", "2", "4", "2"]));
    let (code, v) = json(&["blowdown", "1 2 4 2; 0 1 3 3; 0 0 1 3; 0 0 0 1", "1 0 0 0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["gram"][0], serde_json::json!(["1", "3", "3"]));
    let (code, _, _) = slk(&["blowup", PLANE, "1 0 0"], "");
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn markov() {
    let (code, out, _) = slk(&["markov", "3", "6", "15"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("P2 (3, 3, 3)"));
    let (_, v) = json(&["markov", "0", "0", "0"]);
    assert_eq!(v["class"], "Trivial");
    let (code, _, _) = slk(&["markov", "1", "1", "1"], "");
    assert_eq!(code, EXIT_DOMAIN);
    let (code, _, _) = slk(&["markov", "-3", "-3", "3"], "");
    assert_eq!(code, EXIT_OK);
}

#[test]
fn usage_errors() {
    assert_eq!(slk(&[], "").0, EXIT_MALFORMED);
    assert_eq!(slk(&["frobnicate"], "").0, EXIT_MALFORMED);
    let (code, out, _) = slk(&["--help"], "");
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("classify"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_slk");
    let ok = Command::new(bin).args(["classify", "1 2 2 4; 0 1 0 2; 0 0 1 2; 0 0 0 1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Quadric"));
    let bad = Command::new(bin).args(["check", "1 2; 3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
