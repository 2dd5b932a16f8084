//! End-to-end tests against the compiled binary: output shapes, exit codes,
//! and the input plumbing (flag, file, stdin, order spec).

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bsato(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsato"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bsato_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bsato"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn local_swh_json_matches_known_roots() {
    let out = bsato(&[
        "local-swh",
        "--vars",
        "x,y",
        "--wdeg",
        "6",
        "--weights",
        "2,3",
        "-f",
        "x^3+y^2",
        "--json",
    ]);
    let v = json_of(&out);
    assert_eq!(v["kind"], "local-swh");
    assert_eq!(v["vars"], serde_json::json!(["x", "y"]));
    assert_eq!(
        v["roots"],
        serde_json::json!([{"num": -7, "den": 6}, {"num": -5, "den": 6}])
    );
    assert_eq!(
        v["dims"],
        serde_json::json!([
            {"num": -7, "den": 6, "dim": 1},
            {"num": -5, "den": 6, "dim": 1}
        ])
    );
    assert_eq!(v["milnor"], 2);
    assert_eq!(v["diagnostics"], serde_json::json!([]));
}

#[test]
fn poincare_reports_value_and_roots() {
    let out = bsato(&["poincare", "--wdeg", "30", "--weights", "10,3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("P(1) = 18"), "stdout: {text}");
    assert!(text.contains("-47/30"), "stdout: {text}");

    let v = json_of(&bsato(&[
        "poincare", "--wdeg", "30", "--weights", "10,3", "--json",
    ]));
    assert_eq!(v["milnor"], 18);
    assert_eq!(v["roots"].as_array().unwrap().len(), 18);
}

#[test]
fn implicit_multiplication_is_a_parse_error() {
    let out = bsato(&["milnor", "--vars", "x,y", "-f", "x y"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse"), "stderr: {err}");
}

#[test]
fn wrong_weight_type_is_a_precondition_error() {
    let out = bsato(&[
        "local-swh",
        "--vars",
        "x,y",
        "--wdeg",
        "12",
        "--weights",
        "4,3",
        "-f",
        "x^3+y^2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_catalog_entry_is_rejected() {
    let out = bsato(&["verify", "--entry", "E99"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("E18"), "should list known entries, got: {err}");
}

#[test]
fn reads_polynomial_from_stdin() {
    let out = bsato_stdin(&["milnor", "--vars", "x,y"], "x^3+y^2\n");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("milnor: 2"));
}

#[test]
fn reads_polynomial_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"x^2+y^2").unwrap();
    let out = bsato(&[
        "global-reduced",
        "--vars",
        "x,y",
        "--file",
        file.path().to_str().unwrap(),
        "--json",
    ]);
    let v = json_of(&out);
    assert_eq!(v["roots"], serde_json::json!([{"num": -1, "den": 1}]));
}

#[test]
fn explicit_order_spec_reproduces_default() {
    let default = json_of(&bsato(&[
        "global-reduced",
        "--vars",
        "x,y",
        "-f",
        "x^3+y^2",
        "--json",
    ]));
    let explicit = json_of(&bsato(&[
        "global-reduced",
        "--vars",
        "x,y",
        "-f",
        "x^3+y^2",
        "--json",
        "--order",
        "dt > d:deglex:dx,dy > x:deglex:y,x > s",
    ]));
    assert_eq!(default, explicit);

    let bad = bsato(&[
        "global-reduced",
        "--vars",
        "x,y",
        "-f",
        "x^3+y^2",
        "--order",
        "dt > q > s",
    ]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn cohom_flags_non_roots() {
    let out = bsato(&[
        "cohom",
        "--vars",
        "x,y",
        "-f",
        "x^3+y^2",
        "--gamma",
        "-1/3",
        "--json",
    ]);
    let v = json_of(&out);
    assert_eq!(
        v["diagnostics"],
        serde_json::json!(["gamma is not a root of the global b-function"])
    );
    assert_eq!(v["dims"][0]["dim"], 0);
}

#[test]
fn verify_runs_a_single_stratum() {
    let out = bsato(&[
        "verify", "--entry", "Z15", "--stratum", "1", "--jobs", "2", "--json",
    ]);
    let v = json_of(&out);
    assert_eq!(v["kind"], "verify");
    assert_eq!(v["input"], "Z15");
    assert_eq!(v["passed"], true);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 3);
    assert!(samples.iter().all(|s| s["status"] == "pass"));
}
