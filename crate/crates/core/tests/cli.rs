mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::catalog_slot;
use serde_json::Value;

fn nlk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlk")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn slot_file(dir: &Path, id: &str, role: &str) -> PathBuf {
    let s = catalog_slot(id, role);
    write(dir, &format!("{role}.json"), &serde_json::to_string_pretty(&s.file).unwrap())
}

#[test]
fn solve_reports_an_obstruction_that_recheck_confirms() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "zk.z2.gaussian", "gaussian_complex");
    let o = nlk(&["solve", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "infeasible");
    assert_eq!(report["certificate"]["kind"], "farkas");

    let saved = write(dir.path(), "report.json", &stdout(&o));
    let r = nlk(&["recheck", saved.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    assert!(stdout(&r).contains("confirmed"));
}

#[test]
fn recheck_refutes_a_tampered_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "zk.z2.gaussian", "gaussian_complex");
    let o = nlk(&["solve", f.to_str().unwrap(), "--format", "json"]);
    let mut report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    report["obstructions"][0]["K_r"] = Value::String("-4i".into());
    let saved = write(dir.path(), "report.json", &report.to_string());
    assert_eq!(nlk(&["recheck", saved.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn decompose_finds_no_lk() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "surface.gamma2.no_lk", "direct_sum");
    let o = nlk(&["decompose", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("NO_LK"));
    assert_eq!(text.matches("INFEASIBLE").count(), 2, "{text}");
}

#[test]
fn classify_p2_has_gc() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "p2.derivations", "trivial");
    let o = nlk(&["classify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("GC: CHECKED_TRUE_FINITE"));
}

#[test]
fn feasible_runs_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "zk.z2.gaussian", "gaussian_real");
    for cmd in ["validate", "solve", "decompose", "verify", "oracle"] {
        let o = nlk(&[cmd, f.to_str().unwrap(), "--max-word-length", "3"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
    }
}

#[test]
fn input_errors_exit_one_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "zk.z2.gaussian", "gaussian_real");
    let text = std::fs::read_to_string(&f).unwrap();

    let bad_dim = write(dir.path(), "dim.json", &text.replacen("\"1\"\n    ],\n    \"b\"", "\"1\", \"0\"\n    ],\n    \"b\"", 1));
    let o = nlk(&["validate", bad_dim.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/cocycle/"), "{}", stderr(&o));

    let truncated = write(dir.path(), "cut.json", &text[..text.len() / 2]);
    let o = nlk(&["validate", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let o = nlk(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn step_budget_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let f = slot_file(dir.path(), "ac_not_h2z.definite", "definite");
    let o = Command::new(env!("CARGO_BIN_EXE_nlk"))
        .args(["verify", f.to_str().unwrap(), "--max-word-length", "4"])
        .env("NLK_STEP_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}

#[test]
fn catalog_commands() {
    let list = stdout(&nlk(&["catalog", "list"]));
    assert_eq!(list.lines().count(), nlk::catalog::SOURCES.len());
    assert!(list.contains("freeproduct.p2_z2"));

    let o = nlk(&["catalog", "run", "ac_not_h2z.star_algebra"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("K(η)(y*⊗y) = 1 with μ = 0"));

    let o = nlk(&["catalog", "run-all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["mismatches"], 0);

    assert_eq!(nlk(&["catalog", "run", "no.such.entry"]).status.code(), Some(1));
}

#[test]
fn parallel_and_sequential_agree() {
    let a = stdout(&nlk(&["catalog", "run-all", "--format", "json"]));
    let b = stdout(&nlk(&["catalog", "run-all", "--format", "json", "--sequential"]));
    assert_eq!(a, b);
}
