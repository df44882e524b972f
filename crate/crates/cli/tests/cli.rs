use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use iwalambda::pipeline::{LambdaTrace, Verdict};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwalambda"))
        .args(args)
        .env_remove("IWALAMBDA_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn expand_sqrt_239() {
    let o = run(&["expand", "--ell", "239"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(
        out.contains("[[16; 2, 7, 4, 2, 2, 2, 17, 2, 2, 2, 4, 7, 2, 32]]"),
        "{out}"
    );
    assert!(out.contains("6195120 + 400729√239"), "{out}");
}

#[test]
fn expand_golden_ratio_and_square() {
    let o = run(&["expand", "--d", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[[2; 3]]"));
    let o = run(&["expand", "--d", "4"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not irrational"));
}

#[test]
fn classnum_values() {
    let o = run(&["classnum", "--ell", "47", "--verify"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("= 5"));
    let o = run(&["classnum", "--ell", "239", "--verify"]);
    assert!(stdout(&o).contains("= 15"));
    let o = run(&["classnum", "--ell", "13"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn lambda_239() {
    let o = run(&[
        "lambda", "--ell", "239", "--p", "3", "--n-max", "3", "--verify",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("exact 6"), "{out}");
    assert!(out.contains("lambda_3(-239) = 6"), "{out}");
    assert!(out.contains("lambda_3(-4) = 0"), "{out}");
}

#[test]
fn lambda_47_fast() {
    let o = run(&[
        "lambda",
        "--ell",
        "47",
        "--p",
        "5",
        "--n-max",
        "1",
        "--fast-inert",
        "--verify",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.contains("lambda_5(-47) = 1") && out.contains("lambda_5(-4) = 1"),
        "{out}"
    );
}

#[test]
fn lambda_exit_codes() {
    let o = run(&["lambda", "--ell", "23", "--p", "7", "--n-max", "1"]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("Assumption B fails: 7² | ε^3 − 1"),
        "{}",
        stderr(&o)
    );
    let o = run(&["lambda", "--ell", "239", "--p", "3", "--n-max", "1"]);
    assert_eq!(code(&o), 3);
    let o = run(&[
        "lambda",
        "--ell",
        "127",
        "--p",
        "7",
        "--n-max",
        "1",
        "--fast-inert",
        "--half-k",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn lambda_json_round_trip() {
    let o = run(&["lambda", "--d", "188", "--p", "5", "--n-max", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let trace: LambdaTrace = serde_json::from_str(&text).expect("valid trace");
    assert_eq!(trace.verdict, Verdict::Exact(2));
    let again = serde_json::to_string_pretty(&trace).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
    let back: LambdaTrace = serde_json::from_str(&again).unwrap();
    assert_eq!(back, trace);
}

fn survey(out: &Path, from: &str, to: &str) -> Output {
    run(&[
        "survey",
        "--from",
        from,
        "--to",
        to,
        "--p",
        "3",
        "--n-max",
        "2",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn survey_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("survey.jsonl");
    let o = survey(&path, "3", "100");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = fs::read(&path).unwrap();
    let lines: Vec<serde_json::Value> = first
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 98);
    let status = |ell: i64| {
        lines
            .iter()
            .find(|r| r["ell"] == ell)
            .map(|r| r["status"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(status(47), "computed");
    assert!(status(5).starts_with("skipped:"));
    assert!(status(79).starts_with("skipped:Assumption A fails"));
    let record = lines.iter().find(|r| r["ell"] == 47).unwrap();
    assert!(record["trace"]["trace"][0]["params"]["eta"].is_object());

    let o = survey(&path, "3", "100");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 new"));
    assert_eq!(fs::read(&path).unwrap(), first);
}

#[test]
fn survey_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    let o = survey(&path, "10", "9");
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&path).unwrap().len(), 0);
}

#[test]
fn survey_cache_env_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env.jsonl");
    let csv = dir.path().join("summary.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_iwalambda"))
        .args([
            "survey", "--from", "40", "--to", "50", "--p", "5", "--n-max", "1",
        ])
        .args(["--csv", csv.to_str().unwrap()])
        .env("IWALAMBDA_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 11);
    let table = fs::read_to_string(&csv).unwrap();
    let mut rows = table.lines();
    assert_eq!(
        rows.next(),
        Some("ell,D,p,n_max,status,levels,valuation,verdict,lambda_1,lambda_2")
    );
    assert!(
        table.contains("47,188,5,1,computed,1,2,exact 2,1,1"),
        "{table}"
    );
}
