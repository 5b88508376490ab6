use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const INET: &str = "First, inet daemon can listen on 21 port and then transfer the connection to appropriate handler.
Usually the inet daemon can listen on 8080 port and then transfer the connection to appropriate handler.
On some hosts inet daemon can listen on 443 port and then transfer the connection to appropriate handler.
Alternatively inet daemon can listen on 6000 port and then transfer the connection to appropriate handler.
Finally inet daemon can listen on 119 port and then transfer the connection to appropriate handler.
";

fn docdup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_docdup")).args(args).env_remove("DOCDUP_THREADS").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty.md", "");
    let out = docdup(&["detect", &path]);
    let report = json(&out);
    assert_eq!(report["groups"], Value::Array(vec![]));
    assert_eq!(report["coverage"], "0/1");
    assert_eq!(report["docdup_report_v1"]["symbols"], 0);
    let raw = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<usize> = ["docdup_report_v1", "config", "groups", "histogram", "coverage"]
        .iter()
        .map(|k| raw.find(&format!("\n  \"{k}\":")).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{raw}");
}

#[test]
fn inet_daemon_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "inet.txt", INET);
    let report = json(&docdup(&["detect", &path]));
    let groups = report["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0]["extension_points"], 1);
    assert_eq!(groups[0]["tuples"], 5);
    let values: Vec<&str> = groups[0]["occurrences"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["extension_values"][0]["text"].as_str().unwrap().trim())
        .collect();
    assert_eq!(values, ["21", "8080", "443", "6000", "119"]);
    assert_eq!(report["histogram"], serde_json::json!([{"extension_points": 1, "groups": 1, "percent": "100.00"}]));
    assert_eq!(report["config"]["threshold"], "3/20");
}

#[test]
fn single_exact_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let text = "alpha: the quick brown fox jumps over. beta: the quick brown fox jumps over. gamma: the quick brown fox jumps over.";
    let path = write(dir.path(), "fox.txt", text);
    let report = json(&docdup(&["detect", &path]));
    assert_eq!(report["groups"][0]["tuples"], 3);
    assert_eq!(report["histogram"], serde_json::json!([{"extension_points": 0, "groups": 1, "percent": "100.00"}]));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "inet.txt", &INET.repeat(3));
    let first = docdup(&["detect", &path]);
    let second = Command::new(env!("CARGO_BIN_EXE_docdup")).args(["detect", &path]).env("DOCDUP_THREADS", "3").output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn reports_follow_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..6).map(|i| write(dir.path(), &format!("f{i}.txt"), &INET[..INET.len() * (i + 1) / 6])).collect();
    let mut args = vec!["detect", "--format", "text"];
    args.extend(paths.iter().map(String::as_str));
    let out = docdup(&args);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let order: Vec<usize> = paths.iter().map(|p| stdout.find(&format!("document: {p} ")).unwrap()).collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn html_highlights_groups_and_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "inet.txt", INET);
    let out = docdup(&["detect", "--format", "html", &path]);
    assert!(out.status.success());
    let html = String::from_utf8(out.stdout).unwrap();
    // one group of 5 tuples with 2 parts and 1 gap each, plus its legend entry
    assert_eq!(html.matches("class=\"dup g0\"").count(), 5 * 2 + 1);
    assert_eq!(html.matches("class=\"ext g0\"").count(), 5);
    assert!(!html.contains("g1\""));
    assert!(html.contains("<em class=\"ext g0\"> 8080 </em>"));
}

#[test]
fn out_directory() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.md", INET);
    let b = write(dir.path(), "b.md", "nothing repeats here");
    let out_dir = dir.path().join("reports");
    let out = docdup(&["detect", "--format", "text", "--out", out_dir.to_str().unwrap(), &a, &b]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(out_dir.join("a.md.txt")).unwrap().contains("1 near-duplicate"));
    assert!(fs::read_to_string(out_dir.join("b.md.txt")).unwrap().contains("groups: 0"));
}

#[test]
fn options_are_echoed_and_applied() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "m.html", "<b>one two</b> x <i>one two</i> y one two");
    let report = json(&docdup(&["detect", "--min-tokens", "2", "--strip-markup", "--separators", ".", &path]));
    assert_eq!(report["config"]["min_tokens"], 2);
    assert_eq!(report["config"]["separators"], ".");
    assert_eq!(report["config"]["strip_markup"], true);
    assert_eq!(report["groups"][0]["tuples"], 3);
    assert_eq!(report["groups"][0]["parts"][0]["text"], "one two");

    let strict = json(&docdup(&["detect", "--min-tokens", "2", "--threshold", "0/1", &path]));
    assert_eq!(strict["config"]["threshold"], "0/1");
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "ok.txt", INET);
    let missing = dir.path().join("missing.txt");
    let out = docdup(&["detect", &good, missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
    // the readable file is still reported
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["groups"].as_array().unwrap().len(), 1);
}

#[test]
fn invalid_utf8_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, b"ok \xff\xfe").unwrap();
    assert_eq!(docdup(&["detect", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(docdup(&["detect"]).status.code(), Some(2));
    assert_eq!(docdup(&["detect", "--format", "pdf", "x"]).status.code(), Some(2));
    assert_eq!(docdup(&["detect", "--threshold", "0.15", "x"]).status.code(), Some(2));
    assert_eq!(docdup(&["detect", "--min-group", "1", "x"]).status.code(), Some(2));
}
