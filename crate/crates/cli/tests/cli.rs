use std::process::{Command, Output};

use milnor_core::Error;
use newton_milnor::CliError;
use serde_json::{json, Value};

const EXRF: &str = "x1^7 + x1^3*x2 + x1^2*x2^4";

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newton-milnor")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = cli(&a);
    let v = serde_json::from_slice(&out.stdout).expect("json on stdout");
    (v, out.status.code().unwrap())
}

#[test]
fn documented_examples() {
    let (v, code) = json_of(&["rf", "-e", EXRF]);
    assert_eq!(code, 0);
    assert_eq!(v["Rf"], json!(["0/1", "1/2"]));

    let (v, _) = json_of(&["zeta", "-e", "x1^2+x2^3"]);
    assert_eq!(v["zeta"]["factors"], json!({"2": 1, "3": 1, "6": -1}));

    let (v, _) = json_of(&["jordan", "--theta", "1/10", "-e", EXRF]);
    assert_eq!(v["eigenvalues"][0]["jordan"], json!({"1": 1}));

    let (v, _) = json_of(&["full-spectrum", "-e", "x1^2+x2^3"]);
    assert_eq!(v["full_spectrum"], json!([["5/6", 1], ["7/6", 1]]));
}

#[test]
fn faces_are_ordered() {
    let (v, _) = json_of(&["faces", "-e", EXRF]);
    let faces = v["faces"].as_array().unwrap();
    let keys: Vec<(i64, String)> = faces.iter().map(|f| (f["dim"].as_i64().unwrap(), f["vertices"].to_string())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let distances: Vec<i64> = faces.iter().map(|f| f["distance"].as_i64().unwrap()).collect();
    assert_eq!(distances, vec![2, 1, 7, 10, 7]);
}

#[test]
fn json_round_trip_is_byte_identical() {
    for expr in [EXRF, "x1^2 + x2^3", "x1^3 + x2^3 + x1*x3^3"] {
        let first = cli(&["report", "-e", expr, "--format", "json"]);
        assert!(first.status.success(), "{expr}");
        let v: Value = serde_json::from_slice(&first.stdout).unwrap();
        let input = json!({"n": v["n"], "monomials": v["support"]});
        let path = std::env::temp_dir().join(format!("newton-milnor-{}-{}.json", std::process::id(), v["n"]));
        std::fs::write(&path, input.to_string()).unwrap();
        let second = cli(&["report", "--json", path.to_str().unwrap(), "--format", "json"]);
        std::fs::remove_file(&path).ok();
        assert_eq!(first.stdout, second.stdout, "{expr}");
    }
}

#[test]
fn threads_do_not_change_output() {
    let a = cli(&["report", "-e", EXRF, "--format", "json"]);
    let b = cli(&["report", "-e", EXRF, "--format", "json", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn user_errors_exit_with_one() {
    let cases: &[(&[&str], &str)] = &[
        (&["rf", "-e", "1 + x1"], "constant-term"),
        (&["rf", "-e", "x1 + y2"], "syntax"),
        (&["epoly", "-e", EXRF], "no-eigenvalues"),
        (&["jordan", "-e", EXRF, "--theta", "1/2"], "bad-eigenvalue"),
        (&["jordan", "-e", "x1^2 + x2^3", "--all-good"], "convenient"),
        (&["epoly", "-e", EXRF, "--theta", "3/2"], "bad-theta"),
        (&["rf", "--json", "/nonexistent/input.json"], "io"),
    ];
    for (args, code) in cases {
        let (v, status) = json_of(args);
        assert_eq!(status, 1, "{args:?}");
        assert_eq!(v["error"], json!(code), "{args:?}");
        assert!(v["detail"].is_string());
    }
    // clap usage errors
    assert_eq!(cli(&["rf"]).status.code(), Some(1));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn success_never_emits_an_error_object() {
    for cmd in ["faces", "zeta", "rf", "report", "full-spectrum"] {
        let (v, status) = json_of(&[cmd, "-e", EXRF]);
        assert_eq!(status, 0);
        assert!(v.get("error").is_none());
    }
    let (v, status) = json_of(&["epoly", "-e", EXRF, "--all-good"]);
    assert_eq!(status, 0);
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 14);
}

#[test]
fn internal_failures_map_to_exit_two() {
    let e = CliError::from(Error::Internal("x".into()));
    assert_eq!((e.code.as_str(), e.exit_code()), ("internal", 2));
    let e = CliError::from(Error::precondition("convenient", "x"));
    assert_eq!((e.code.as_str(), e.exit_code()), ("convenient", 1));
}

#[test]
fn human_format_shows_tables() {
    let out = cli(&["report", "-e", "x1^2 + x2^3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(1-t^2) * (1-t^3) * (1-t^6)^-1"), "{text}");
    assert!(text.contains("t^(5/6) + t^(7/6)"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("1/6") && l.contains("-u")), "{text}");
}
