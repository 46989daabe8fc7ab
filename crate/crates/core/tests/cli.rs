//! The command-line binary: exit codes, `--out`, and reproducible output.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic-compose"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn relator_reduces_to_the_empty_word() {
    let out = run(&["--field", "2", "--corpus", "fermat-curve", "word", "nf", "0,1,2,0,1,2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["tool"], "cubic-compose");
    assert_eq!(v["results"]["word"], serde_json::json!([]), "{v}");
}

#[test]
fn universal_equivalence_on_diagonal_surface() {
    let out = run(&["--field", "4", "--corpus", "diagonal-a", "uequiv"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["partition"]["class_count"], 9);
}

#[test]
fn split_surface_u3_is_trivial() {
    let out = run(&["--field", "7", "split", "check", "--theorem", "5.4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["results"]["class_count"], 1);
    assert_eq!(v["results"]["passed"], true);
}

#[test]
fn out_file_matches_stdout_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = [
        "--field", "4", "--seed", "5", "enumerate-surfaces", "--mode", "sampled", "--samples", "30",
    ];
    let stdout = run(&args).stdout;
    let mut with_out: Vec<&str> = vec!["--out", path.to_str().unwrap()];
    with_out.extend(args);
    let out = run(&with_out);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn budget_exhaustion_exits_with_code_2() {
    let out = run(&["--field", "2", "--corpus", "fermat-curve", "--budget", "1", "word", "nf", "0,1,2,0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string());
}

#[test]
fn invalid_input_exits_with_code_3() {
    for args in [
        vec!["bogus"],
        vec!["--field", "6", "--corpus", "fermat-curve", "collinearity"],
        vec!["--field", "3", "enumerate-surfaces", "--mode", "exhaustive"],
        vec!["--field", "7", "split", "check", "--theorem", "9.9"],
    ] {
        assert_eq!(run(&args).status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    assert!(run(&["--help"]).status.success());
}
