use std::io::Write as _;

use chatelet::{run_cli, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run_cli(std::iter::once("chatelet").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (
        code,
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")),
    )
}

#[test]
fn decide_reports_are_byte_stable() {
    for args in [
        &["decide", "--a", "6", "--poly", "6,0,5,0,1"][..],
        &["decide", "--a", "-1", "--poly", "1,-1,1,0,0,1"],
        &["decide", "--a", "-1", "--poly", "-1"],
    ] {
        let (c1, first) = run(args);
        let (c2, second) = run(args);
        assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
        assert_eq!(first, second);
        assert!(first.ends_with("}\n"));
    }
}

#[test]
fn report_layout() {
    let (_, v) = run_json(&["decide", "--a", "6", "--poly", "6,0,5,0,1"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["verdict", "reason_chain", "conditions", "invariants", "reduction_trace"]
    );
    assert_eq!(v["verdict"], "NOT_RATIONAL");
    assert_eq!(v["invariants"]["h1"], serde_json::json!([2]));
    let primary: Vec<&Value> = v["reason_chain"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["role"] == "primary")
        .collect();
    assert_eq!(primary.len(), 1);
    assert_eq!(primary[0]["anchor"], "cohomology_obstruction");
}

#[test]
fn problem_file_matches_flags() {
    let dir = std::env::temp_dir().join(format!("chatelet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("problem.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(f, r#"{{"a": "6", "poly": ["6", "0", "5", "0", "1"]}}"#).unwrap();
    drop(f);
    let (code, from_file) = run(&["decide", "--json-in", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(from_file, run(&["decide", "--a", "6", "--poly", "6,0,5,0,1"]).1);

    std::fs::write(&path, r#"{"a": "6", "poly": "6,0,5,0,1", "extra": 1}"#).unwrap();
    let (code, v) = run_json(&["decide", "--json-in", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(v["error"]["kind"], "input");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["decide", "--a", "0", "--poly", "1,0,1"][..],
        &["decide", "--a", "2", "--poly", "0"],
        &["decide", "--a", "x", "--poly", "1"],
        &["decide", "--a", "1/0", "--poly", "1"],
        &["decide", "--a", "2"],
        &["decide", "--json-in", "/nonexistent/problem.json"],
        &["descent", "--r", "5", "--m0", "3"],
        &["delpezzo", "--points", "6"],
        &["cohomology", "--blocks", "2,x"],
        &["frobnicate"],
    ] {
        let (code, v) = run_json(args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(
            v["error"]["message"].as_str().is_some_and(|m| !m.is_empty()),
            "{args:?}"
        );
    }
}

#[test]
fn resource_caps_exit_3() {
    let (code, v) = run_json(&["cohomology", "--blocks", "6,6", "--group-cap", "16"]);
    assert_eq!(code, EXIT_RESOURCE);
    assert_eq!(v["error"]["kind"], "resource");
    let (code, _) = run_json(&["descent", "--r", "6", "--m0", "30", "--depth-cap", "3"]);
    assert_eq!(code, EXIT_RESOURCE);
}

#[test]
fn help_and_version() {
    let (code, text) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("decide"));
    let (code, text) = run(&["--version"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn auxiliary_commands() {
    let (code, v) = run_json(&["cohomology", "--blocks", "3,2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["j"], 1);
    let (_, v) = run_json(&["delpezzo", "--points", "7"]);
    assert_eq!(v["count"], 126);
    let (_, v) = run_json(&[
        "delpezzo",
        "--fiber-r",
        "9",
        "--m-max",
        "3",
        "--nu-bound",
        "10",
        "--len-max",
        "6",
    ]);
    assert_eq!(v["infeasible"], true);
    let (_, v) = run_json(&["descent", "--r", "4", "--m0", "6"]);
    assert_eq!(v["all_terminal"], true);
    let (_, v) = run_json(&["surface", "--r", "3"]);
    assert_eq!(v["canonical_square"], 2);
}
