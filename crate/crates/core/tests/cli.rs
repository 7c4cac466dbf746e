use std::process::{Command, Output};

use serde_json::Value;

fn templie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_templie")).args(args).env_remove("TEMPLIE_MAX_N").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json", "--no-timestamp"];
    all.extend_from_slice(args);
    let out = templie(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn basis_lists_links_in_order() {
    let (code, v) = json(&["basis", "--links", "6", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "basis");
    assert_eq!(v["status"], "info");
    let text = v["result"].to_string();
    for key in ["21/32", "11/16", "25/32", "13/16", "7/8"] {
        assert!(text.contains(key), "{key} missing from {text}");
    }
}

#[test]
fn exact_matrix_round_trips() {
    let (code, v) = json(&["matrix", "S", "6", "0"]);
    assert_eq!(code, 0);
    let entries = &v["result"]["entries"];
    assert_eq!(entries[4][4], serde_json::json!(["4", "0", "1"]));
    assert_eq!(entries[3][4], serde_json::json!(["0", "-1"]));
    assert_eq!(entries[0][1], serde_json::json!([]));
}

#[test]
fn evaluated_matrix_uses_decimal_strings() {
    let (code, v) = json(&["--precision", "3", "matrix", "loop", "4", "0", "--beta", "0.5"]);
    assert_eq!(code, 0);
    assert!(v["result"].to_string().contains("\"-1.000\""));
}

#[test]
fn verify_reports_pass() {
    let (code, v) = json(&["verify", "intertwine", "--n-max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    let (code, _) = json(&["verify", "gram-adjoint", "--n", "5", "--d", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn decompose_reproduces_the_figure() {
    let (code, v) = json(&["decompose", "20", "3", "5"]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("P10 + P12 + V14 + V16 + P20"));
}

#[test]
fn jordan_block_at_q_i() {
    let (code, v) = json(&["spectrum", "jordan", "--xxz", "2", "--q", "i"]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("\"blocks\":[2"), "{v}");
}

#[test]
fn reality_sweep_streams_json_lines() {
    let out =
        templie(&["--format", "json", "--no-timestamp", "spectrum", "reality", "--sweep", "4", "--beta", "0.5,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() >= 2);
}

#[test]
fn csv_has_a_header() {
    let out = templie(&["--format", "csv", "basis", "--links", "4", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines();
    assert!(rows.next().unwrap().contains(','));
    assert_eq!(rows.count(), 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--format", "json", "--no-timestamp", "matrix", "f", "6", "2"][..],
        &["--format", "csv", "spectrum", "positivity", "--n", "6", "--d", "0"][..],
        &["--format", "json", "--no-timestamp", "spectrum", "inclusion", "--n", "4"][..],
    ] {
        assert_eq!(templie(args).stdout, templie(args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(templie(&["matrix", "loop", "4", "1"]).status.code(), Some(2));
    assert_eq!(templie(&["nonsense"]).status.code(), Some(2));
    assert_eq!(templie(&["verify", "intertwine", "--n-max", "40"]).status.code(), Some(3));
    assert_eq!(templie(&["--help"]).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_templie"))
        .args(["matrix", "gram", "13", "1"])
        .env("TEMPLIE_MAX_N", "13")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("templie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = templie(&["--format", "json", "-o", path.to_str().unwrap(), "basis", "--spins", "3", "-1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "basis");
    assert!(v["generated_unix"].is_u64());
    std::fs::remove_dir_all(dir).unwrap();
}
