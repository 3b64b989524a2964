use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypercomplex"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let oct = dir.path().join("o.json");
    let sed = dir.path().join("s.json");
    assert_eq!(run(&["cayley-dickson", "--levels", "3", "--out", path(&oct)]).0, 0);
    assert_eq!(run(&["cayley-dickson", "--levels", "4", "--out", path(&sed)]).0, 0);
    assert_eq!(run(&["verify", path(&oct), "--suite", "alternative"]).0, 0);
    let (code, text) = run(&["verify", path(&sed), "--suite", "alternative"]);
    assert_eq!(code, 1);
    assert!(text.contains("\"witness\""));
    assert_eq!(run(&["verify", path(&sed), "--suite", "weak-alternative,flexible,power-associative"]).0, 0);
}

#[test]
fn usage_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2}").unwrap();
    assert_eq!(run(&["verify", path(&bad)]).0, 2);
    assert_eq!(run(&["verify", "/nonexistent/table.json"]).0, 2);
    assert_eq!(run(&["forge", "--n", "6"]).0, 2);
    assert_eq!(run(&["cayley-dickson", "--levels", "9"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn construction_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let theta = dir.path().join("zero.json");
    let zero: Vec<Vec<[f64; 2]>> = vec![vec![[0.0, 0.0]; 8]; 8];
    std::fs::write(&theta, serde_json::json!({ "matrix": zero }).to_string()).unwrap();
    assert_eq!(run(&["forge", "--n", "8", "--theta", path(&theta)]).0, 3);
}

#[test]
fn forge_with_log_and_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("f.json");
    let log = dir.path().join("f.log");
    let (code, _) = run(&["--jobs", "2", "forge", "--n", "8", "--out", path(&t), "--log", path(&log)]);
    assert_eq!(code, 0);
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.last().unwrap()["step"], "forge");
    assert!(lines.iter().any(|l| l["step"] == "align"));

    let (code, text) = run(&["symmetry", "--table", path(&t)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["derivation_dim"], 14);

    let (_, text) = run(&["symmetry", "--n", "8"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["stabilizer_dim"], 14);
    assert_eq!(v["so_dim"], 28);

    let (_, text) = run(&["zero-divisors", path(&t)]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["count"], 0);
}

#[test]
fn theta_parts_file() {
    let dir = tempfile::tempdir().unwrap();
    let theta = dir.path().join("t.json");
    std::fs::write(&theta, r#"{"parts": []}"#).unwrap();
    let (code, text) = run(&["classify", "--n", "8", "--theta", path(&theta)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["groups"].as_array().unwrap().len(), 1);
}
