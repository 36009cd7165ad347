use std::io::Write;
use std::process::{Command, Output, Stdio};

fn congrua(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_congrua"))
        .args(args)
        .env_remove("CONGRUA_TOL_RANK")
        .env_remove("CONGRUA_TOL_EIG")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_inline_literal() {
    let o = congrua(&["classify", "--json", "[[0,1],[-1,0]]"], "");
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "ii");
    assert_eq!(v["codim"], 3);
}

#[test]
fn classify_from_stdin_document() {
    let doc = r#"{"n":2,"entries":[[[0,0],[1,0]],[[2,0],[0,0]]]}"#;
    let o = congrua(&["classify", "--json", "-"], doc);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "v_lambda");
    assert_eq!(v["param"], serde_json::json!([2.0, 0.0]));
}

#[test]
fn malformed_input_names_the_entry() {
    let o = congrua(&["classify", "-"], "1 2\n3 x\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2, column 2"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(congrua(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(congrua(&["graph", "classes", "--n", "4"], "").status.code(), Some(1));
    assert_eq!(congrua(&["graph", "classes", "--n", "2", "--format", "svg"], "").status.code(), Some(1));
}

#[test]
fn graph_output_is_deterministic() {
    let a = congrua(&["graph", "classes", "--n", "3", "--format", "dot"], "");
    let b = congrua(&["graph", "classes", "--n", "3", "--format", "dot"], "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tolerance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_congrua"))
        .args(["classify", "[[1,1e-4],[-1e-4,0]]"])
        .env("CONGRUA_TOL_RANK", "1e-10")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("class: iv\n"), "{}", stdout(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_congrua"))
        .args(["codim", "1"])
        .env("CONGRUA_TOL_EIG", "nope")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_montecarlo_small_run() {
    let o = congrua(&["verify", "montecarlo", "--trials", "100", "--eps", "1e-3", "--seed", "7"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_reports_violations_with_exit_three() {
    // (4, 7) has no computed refutation, so the non-edge suite reports a violation.
    let o = congrua(&["verify", "nonedge", "--trials", "20"], "");
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "fail");
}
