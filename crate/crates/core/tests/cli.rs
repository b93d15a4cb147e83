use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sumsetlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsetlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn strip_wall_clock(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_clock_ms");
            m.values_mut().for_each(strip_wall_clock);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_wall_clock),
        _ => {}
    }
}

#[test]
fn estimate_beta_of_two_points() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("u.txt"), "group 1\n0\n1\n").unwrap();
    let out = sumsetlab(&["estimate", "beta", "--set", "u.txt", "--max-card", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value_exact"], "4/1");
    assert_eq!(v["config"]["manifest"]["subcommand"], "estimate beta");
    assert_eq!(v["config"]["manifest"]["inputs"][0]["path"], "u.txt");
}

#[test]
fn exponent_at_most_one_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("u.txt"), "group 1\n0\n1\n").unwrap();
    let out = sumsetlab(&["estimate", "beta", "--set", "u.txt", "--p", "1/2"], dir.path());
    assert_eq!(out.status.code(), Some(64));
    let out = sumsetlab(&["estimate", "beta", "--set", "u.txt", "--p", "1"], dir.path());
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = sumsetlab(&["estimate", "beta", "--set", "nope.txt"], dir.path());
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn quasicube_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = sumsetlab(&["laws", "run", "--suite", "quasicube", "--seed", "7", "--out", "v.jsonl"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("v.jsonl")).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, verdicts) = lines.split_last().unwrap();
    assert!(!verdicts.is_empty());
    assert!(verdicts.iter().all(|v| v["law"].is_string() && v["holds"] == true));
    assert_eq!(summary["manifest"]["subcommand"], "laws run");
}

#[test]
fn laws_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |t: &str| {
        let out = sumsetlab(&["laws", "run", "--suite", "bm", "--seed", "3", "--count", "6", "--threads", t], dir.path());
        assert_eq!(out.status.code(), Some(0));
        let mut lines: Vec<Value> = String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        lines.iter_mut().for_each(strip_wall_clock);
        lines
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn interrupted_scan_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["conjecture", "scan", "--id", "log_span", "--box", "0..2", "--dim", "2", "--max-size", "4", "--shard-size", "16"];
    let mut full = common.to_vec();
    full.extend(["--out", "full.jsonl"]);
    assert_eq!(sumsetlab(&full, dir.path()).status.code(), Some(0));

    let mut part = common.to_vec();
    part.extend(["--out", "part.jsonl", "--checkpoint", "ck.json", "--max-shards", "3"]);
    assert_eq!(sumsetlab(&part, dir.path()).status.code(), Some(0));
    // Simulate a crash that left a partial record behind the checkpoint.
    let p = dir.path().join("part.jsonl");
    let mut text = std::fs::read_to_string(&p).unwrap();
    text.push_str("{\"torn\":");
    std::fs::write(&p, text).unwrap();
    let resumed = [&part[..part.len() - 2]].concat();
    assert_eq!(sumsetlab(&resumed, dir.path()).status.code(), Some(0));

    let a = std::fs::read_to_string(dir.path().join("full.jsonl")).unwrap();
    let b = std::fs::read_to_string(&p).unwrap();
    assert_eq!(a, b);
    assert!(a.lines().count() > 0);
}

#[test]
fn quasicube_gen_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = sumsetlab(&["quasicube", "gen", "--depth", "3", "--seed", "5", "--out", "q.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = sumsetlab(&["quasicube", "check", "--set", "q.txt"], dir.path());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_quasicube"], true);
    assert_eq!(v["dimension"], 3);
}
