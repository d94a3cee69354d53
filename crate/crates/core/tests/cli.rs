use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symgrowth"))
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn fixture_json_field_order() {
    let out = bin().args(["--fixture", "r1", "--steps", "10", "--json", "-"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let keys = ["betti_plus", "betti_minus", "poincare_plus", "poincare_minus", "cx_plus", "cx_minus", "symmetric", "checks", "command", "details"];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
    let v = json(&out);
    assert_eq!(v["betti_plus"], serde_json::json!(vec![1; 11]));
    assert_eq!(v["cx_plus"], 1);
    assert_eq!(v["symmetric"], true);
}

#[test]
fn identical_across_processes() {
    let run = || bin().args(["--all-fixtures", "--steps", "9", "--seed", "3", "--json", "-"]).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn print_job_round_trips() {
    let out = bin().args(["--fixture", "r2-omega", "--print-job"]).output().unwrap();
    assert!(out.status.success());
    let again = with_stdin(&["-", "--print-job"], std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn job_file_and_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.txt");
    std::fs::write(&job, "ring{p=101; vars=x; rels=x^3}\nmodule{rows=[0]; cols=[1]; entries=[[x]]}\ncmd=resolve\n").unwrap();
    let report = dir.path().join("out.json");
    let out = bin().arg(&job).arg("--json").arg(&report).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("command: resolve"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["betti_plus"], serde_json::json!(vec![1; 9]));
}

fn error(input: &str, args: &[&str]) -> (i32, Value) {
    let mut all = vec!["-", "--json", "-"];
    all.extend_from_slice(args);
    let out = with_stdin(&all, input);
    (out.status.code().unwrap(), json(&out)["error"].clone())
}

#[test]
fn input_errors_exit_2() {
    let (code, e) = error("ring{p=32004; vars=x; rels=x^2}", &[]);
    assert_eq!((code, e["kind"].as_str()), (2, Some("not_prime")));

    let (code, e) = error("ring{p=13; vars=x; rels=x^2}", &[]);
    assert_eq!((code, e["kind"].as_str()), (2, Some("unsupported_modulus")));

    let (code, e) = error("ring{p=7; vars=x; rels=x^2+x}", &[]);
    assert_eq!((code, e["kind"].as_str()), (2, Some("not_homogeneous")));

    let (code, e) = error("ring{p=7; vars=x rels=x^2}", &[]);
    assert_eq!((code, e["kind"].as_str()), (2, Some("parse")));
    assert_eq!((e["line"].as_u64(), e["col"].as_u64()), (Some(1), Some(16)));

    let (code, e) = error("ring{p=7; vars=x; rels=x^2}", &["--cmd", "nonsense"]);
    assert_eq!((code, e["kind"].as_str()), (2, Some("invalid_input")));
}

#[test]
fn refusal_exits_3() {
    let job = "ring{p=32003; vars=x,y; rels=x^2,xy,y^2}\ncmd=complete\n";
    let (code, e) = error(job, &[]);
    assert_eq!(code, 3);
    assert_eq!(e["kind"], "not_totally_reflexive");
    assert!(e["message"].as_str().unwrap().contains("reflexivity"));
}

#[test]
fn unknown_fixture() {
    let out = bin().args(["--fixture", "r9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
