use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_circuit-count"));
    c.env_remove("CIRCUIT_COUNT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const RUNNING: &str = r#"{"circuit": {"n": 2, "points": [[0,0],[1,0],[0,1],[2,-2]]},
  "gs": [{"a": "1", "b": "1"}, {"a": "-2/73", "b": "20/73"}]}"#;

#[test]
fn analyze_running_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", r#"{"n": 2, "points": [[0,0],[1,0],[0,1],[2,-2]]}"#);
    let out = run(&["analyze", &f]);
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["results"]["m"], 2);
    assert_eq!(r["results"]["rank_mod2"], 2);
    assert_eq!(r["results"]["volume"], "3");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["analyze", "/nonexistent/circuit.json"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(run(&["analyze", &bad]).status.code(), Some(2));
    let col = write(dir.path(), "col.json", r#"{"n": 2, "points": [[0,0],[1,1],[2,2],[3,3]]}"#);
    let out = run(&["analyze", &col]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DegenerateSpan"));
    let shared = write(
        dir.path(),
        "shared.json",
        r#"{"circuit": {"n": 2, "points": [[0,0],[1,0],[0,1],[2,-2]]},
            "gs": [{"a": "1", "b": "1"}, {"a": "2", "b": "2"}]}"#,
    );
    assert_eq!(run(&["count", &shared]).status.code(), Some(4));
    assert_eq!(run(&["witness", "--n", "4", "--positive", "--budget", "0"]).status.code(), Some(5));
}

#[test]
fn count_and_eliminant_of_running_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.json", RUNNING);
    let out = run(&["count", "--positive", &f]);
    assert!(out.status.success());
    assert_eq!(report(&out)["results"], serde_json::json!({"positive": 3}));
    let e = report(&run(&["eliminant", &f]));
    assert_eq!(e["results"]["f"].as_array().unwrap().len(), 4);
    assert_eq!(e["results"]["h"].as_array().unwrap().len(), 3);
}

#[test]
fn decimal_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let text = RUNNING.replace(r#""a": "-2/73", "b": "20/73""#, r#""a": "-0.0273972602739726", "b": "0.273972602739726""#);
    let f = write(dir.path(), "d.json", &text);
    let out = run(&["count", &f]);
    assert!(out.status.success());
}

#[test]
fn bounds_report() {
    let out = run(&["bounds", "4", "4", "3"]);
    let r = report(&out);
    assert_eq!(r["results"]["positive_bound"], 5);
    assert_eq!(r["results"]["real_bound"], 16);
    assert_eq!(run(&["bounds", "2", "3", "1"]).status.code(), Some(3));
}

#[test]
fn witness_round_trip_and_stability() {
    let dir = tempfile::tempdir().unwrap();
    for args in [vec!["--n", "2", "--positive"], vec!["--n", "3", "--R", "2"], vec!["--n", "3", "--m", "2", "--R", "3"]] {
        let sys = dir.path().join("w.json");
        let mut full = vec!["witness"];
        full.extend(&args);
        full.extend(["--out", sys.to_str().unwrap()]);
        let a = run(&full);
        assert!(a.status.success(), "{args:?}");
        let b = run(&full);
        assert_eq!(a.stdout, b.stdout, "report not byte-stable for {args:?}");
        let r = report(&a);
        assert_eq!(r["results"]["claimed"], r["results"]["measured"]);
        let v = run(&["verify", sys.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stdout));
        assert_eq!(report(&v)["results"]["oracle"]["agrees"], true);
    }
}

#[test]
fn seed_from_environment() {
    let out = bin().args(["witness", "--n", "2", "--R", "1", "--seed", "3"]).env("CIRCUIT_COUNT_SEED", "11").output().unwrap();
    assert!(out.status.success());
    assert_eq!(report(&out)["inputs"]["seed"], 11);
}

#[test]
fn solve_lists_real_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.json", RUNNING);
    let r = report(&run(&["solve", &f]));
    let count = report(&run(&["count", &f]))["results"]["real"].as_u64().unwrap();
    assert_eq!(r["results"]["count"].as_u64().unwrap(), count);
    for s in r["results"]["solutions"].as_array().unwrap() {
        assert!(s["residual"].as_f64().unwrap() < 1e-8);
    }
}
