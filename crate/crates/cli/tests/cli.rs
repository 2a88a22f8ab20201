use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn operad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_operad")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("operad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn built(name: &str, args: &[&str]) -> String {
    let path = tmp(name);
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["build"];
    all.extend_from_slice(args);
    all.extend(["-o", &p]);
    let o = operad(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn signature_of_as() {
    let p = built("as5.json", &["as", "-N", "5"]);
    let o = operad(&["signature", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "0,1,2,9,44");
}

#[test]
fn info_and_series() {
    let p = built("d2.json.gz", &["d", "-N", "4", "--dim", "2"]);
    let info = stdout_json(&operad(&["info", &p]));
    assert_eq!(info["dims"], serde_json::json!([1, 3, 5, 7, 9]));
    assert_eq!(info["two_unit"], Value::Bool(true));
    let s = stdout_json(&operad(&["series", &p, "--binomial"]));
    assert_eq!(s["transform"], serde_json::json!(["1", "2", "0", "0", "0"]));
    assert!(s.get("rational_terms").is_none());
}

#[test]
fn verify_passes_on_a_builtin() {
    let p = built("as4.json", &["as", "-N", "4"]);
    let o = operad(&["verify", &p, "--axioms", "--basis-theorem", "--recursion"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["passed"], Value::Bool(true));
}

#[test]
fn verify_reports_a_broken_table_with_status_one() {
    let p = built("as3.json", &["as", "-N", "3"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let entry = v["compositions"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|c| c["m"] == 2 && c["i"] == 1 && c["n"] == 2)
        .unwrap();
    entry["table"][0][0][0] = Value::String("2".into());
    let bad = tmp("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let bad = bad.to_str().unwrap();
    let o = operad(&["verify", bad]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["passed"], Value::Bool(false));
    // loading it for any other command is refused
    let o = operad(&["info", bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains('∘'));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(operad(&[]).status.code(), Some(2));
    assert_eq!(operad(&["build", "as"]).status.code(), Some(2));
    assert_eq!(operad(&["build", "d", "-N", "3"]).status.code(), Some(2));
    assert_eq!(operad(&["build", "lie", "-N", "3"]).status.code(), Some(2));
    assert_eq!(operad(&["info", tmp("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(operad(&["--help"]).status.code(), Some(0));
}

#[test]
fn truncate_and_quotient() {
    let p = built("as4q.json", &["as", "-N", "4"]);
    let q = tmp("as4_mod_u4.json");
    let o = operad(&["truncate", &p, "-k", "4", "--quotient", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["dims"], serde_json::json!([0, 0, 0, 0, 9]));
    let info = stdout_json(&operad(&["info", q.to_str().unwrap()]));
    assert_eq!(info["dims"][4], 15);
}

#[test]
fn truncatify_then_verify_poisson() {
    let p = built("as3t.json", &["as", "-N", "3"]);
    let t = tmp("trc3.json");
    assert_eq!(operad(&["truncatify", &p, "-o", t.to_str().unwrap()]).status.code(), Some(0));
    let o = operad(&["verify", t.to_str().unwrap(), "--truncatified", "--poisson"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    // without a grading the Poisson check is a usage error
    assert_eq!(operad(&["verify", &p, "--poisson"]).status.code(), Some(2));
}

#[test]
fn classify_small_arities() {
    let o = operad(&["classify", "--thm07", "-N", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["passed"], Value::Bool(true));
    assert_eq!(operad(&["classify"]).status.code(), Some(2));
}

#[test]
fn results_do_not_depend_on_threads() {
    let p = built("as5t.json", &["as", "-N", "5"]);
    let a = operad(&["--threads", "1", "signature", &p]).stdout;
    let b = operad(&["--threads", "4", "signature", &p]).stdout;
    assert_eq!(a, b);
}
