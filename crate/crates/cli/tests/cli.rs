//! End-to-end tests of the `lpa` binary: document round trips, exit codes,
//! and byte-level determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lpa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpa"))
        .current_dir(dir)
        .args(args)
        .env_remove("LPA_CAP")
        .output()
        .expect("binary runs")
}

fn lpa_env(dir: &Path, args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpa"))
        .current_dir(dir)
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("loop.json", r#"{"vertices":["v"],"edges":[["v","v",1]]}"#),
        (
            "breaking.json",
            r#"{"vertices":["w","h"],"edges":[["w","h","inf"],["w","w",1]]}"#,
        ),
        (
            "line.json",
            r#"{"vertices":["u","v"],"edges":[["u","v",1]]}"#,
        ),
        (
            "ideal_sq.json",
            r#"{"H":[],"S":[],"polyparts":[{"cycle":["v"],"f":"x^2+1"}],"field":{"p":2}}"#,
        ),
        (
            "ideal_lin.json",
            r#"{"H":[],"S":[],"polyparts":[{"cycle":["v"],"f":"x+1"}],"field":{"p":2}}"#,
        ),
        ("pair_h.json", r#"{"H":["h"],"S":[]}"#),
        ("pair_top.json", r#"{"H":["h","w"],"S":[]}"#),
        (
            "poset.json",
            r#"{"elements":["a","b","c","d"],"lt":[["a","b"],["a","c"],["b","d"],["c","d"]]}"#,
        ),
        ("chain2.json", r#"{"elements":["p","q"],"lt":[["p","q"]]}"#),
    ];
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn spec_on_loop_instantiates_two_irreducibles() {
    let dir = setup();
    let out = lpa(
        dir.path(),
        &["spec", "loop.json", "--field", "F2", "--max-degree", "2"],
    );
    let v = stdout_json(&out);
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 2);
    assert_eq!(nodes[0]["kind"], "graded");
    assert_eq!(nodes[1]["kind"], "family");
    assert_eq!(nodes[1]["instances"], serde_json::json!(["x+1", "x^2+x+1"]));
}

#[test]
fn semiprime_verdicts_exit_zero() {
    let dir = setup();
    let out = lpa(dir.path(), &["semiprime", "loop.json", "ideal_sq.json"]);
    assert_eq!(stdout_json(&out)["semiprime"], serde_json::json!(false));
    let out = lpa(dir.path(), &["semiprime", "loop.json", "ideal_lin.json"]);
    assert_eq!(stdout_json(&out)["semiprime"], serde_json::json!(true));
}

#[test]
fn prime_reports_case_and_reason() {
    let dir = setup();
    let out = lpa(dir.path(), &["prime", "loop.json", "ideal_lin.json"]);
    let v = stdout_json(&out);
    assert_eq!(v["prime"], serde_json::json!(true));
    assert_eq!(v["case"], serde_json::json!(3));
    assert_eq!(v["witness"]["f"], serde_json::json!("x+1"));

    let out = lpa(dir.path(), &["prime", "loop.json", "ideal_sq.json"]);
    let v = stdout_json(&out);
    assert_eq!(v["prime"], serde_json::json!(false));
    assert!(v["reason"].as_str().unwrap().contains("reducible"));
}

#[test]
fn regular_verdict_on_line() {
    let dir = setup();
    let out = lpa(dir.path(), &["regular", "line.json"]);
    let v = stdout_json(&out);
    assert_eq!(v["regular"], serde_json::json!(true));
    let out = lpa(dir.path(), &["regular", "loop.json"]);
    assert_eq!(stdout_json(&out)["regular"], serde_json::json!(false));
}

#[test]
fn quotient_output_reloads_as_a_graph() {
    let dir = setup();
    let out = lpa(
        dir.path(),
        &["quotient", "breaking.json", "--pair", "pair_h.json"],
    );
    let v = stdout_json(&out);
    assert_eq!(v["empty"], serde_json::json!(false));
    assert_eq!(v["primed"], serde_json::json!(["w'"]));
    // Feed the quotient back in as a graph document.
    fs::write(dir.path().join("quot.json"), v.to_string()).unwrap();
    let out = lpa(dir.path(), &["hss", "quot.json"]);
    assert!(out.status.success());

    let out = lpa(
        dir.path(),
        &["quotient", "breaking.json", "--pair", "pair_top.json"],
    );
    assert_eq!(stdout_json(&out)["empty"], serde_json::json!(true));
}

#[test]
fn realize_then_verify_round_trip() {
    let dir = setup();
    let out = lpa(
        dir.path(),
        &["realize", "poset.json", "--out", "realized.json"],
    );
    assert!(out.status.success());
    let out = lpa(dir.path(), &["spec", "realized.json"]);
    let v = stdout_json(&out);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    let out = lpa(dir.path(), &["verify-realization", "poset.json"]);
    assert_eq!(stdout_json(&out)["realized"], serde_json::json!(true));
}

#[test]
fn props_reports_all_four_properties() {
    let dir = setup();
    let out = lpa(dir.path(), &["props", "chain2.json"]);
    let v = stdout_json(&out);
    for key in ["glb", "dc", "dd", "kap"] {
        assert_eq!(v[key], serde_json::json!(true), "{key}");
    }
    assert_eq!(v["r_set"], serde_json::json!(["p", "q"]));
}

#[test]
fn pairs_and_hss_agree_on_breaking_graph() {
    let dir = setup();
    let out = lpa(dir.path(), &["hss", "breaking.json"]);
    assert_eq!(stdout_json(&out)["hss"].as_array().unwrap().len(), 3);
    let out = lpa(dir.path(), &["pairs", "breaking.json"]);
    assert_eq!(stdout_json(&out)["pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn sum_and_intersect_round_trip_through_documents() {
    let dir = setup();
    fs::write(
        dir.path().join("a.json"),
        r#"{"H":[],"S":[],"polyparts":[{"cycle":["v"],"f":"x^2+1"}],"field":{"p":2}}"#,
    )
    .unwrap();
    fs::write(
        dir.path().join("b.json"),
        r#"{"H":[],"S":[],"polyparts":[{"cycle":["v"],"f":"x^3+1"}],"field":{"p":2}}"#,
    )
    .unwrap();
    let out = lpa(dir.path(), &["sum", "loop.json", "a.json", "b.json"]);
    let v = stdout_json(&out);
    // gcd(x^2+1, x^3+1) = x+1 over F_2.
    assert_eq!(v["polyparts"][0]["f"], serde_json::json!("x+1"));
    // The output document loads back in.
    fs::write(dir.path().join("s.json"), v.to_string()).unwrap();
    let out = lpa(dir.path(), &["semiprime", "loop.json", "s.json"]);
    assert_eq!(stdout_json(&out)["semiprime"], serde_json::json!(true));

    let out = lpa(dir.path(), &["intersect", "loop.json", "a.json", "b.json"]);
    let v = stdout_json(&out);
    // lcm = (x+1)^2 (x^2+x+1) = x^4+x^3+x+1 over F_2.
    assert_eq!(v["polyparts"][0]["f"], serde_json::json!("x^4+x^3+x+1"));
}

#[test]
fn byte_identical_reruns() {
    let dir = setup();
    for args in [
        vec![
            "spec",
            "breaking.json",
            "--field",
            "F2",
            "--max-degree",
            "2",
        ],
        vec!["pairs", "breaking.json"],
        vec!["props", "poset.json"],
    ] {
        let a = lpa(dir.path(), &args);
        let b = lpa(dir.path(), &args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn dot_exports_are_written_and_stable() {
    let dir = setup();
    let out = lpa(dir.path(), &["spec", "breaking.json", "--dot", "spec.dot"]);
    assert!(out.status.success());
    let first = fs::read_to_string(dir.path().join("spec.dot")).unwrap();
    assert_eq!(first.matches(" -> ").count(), 3);
    assert!(first.contains("peripheries=2"));
    lpa(dir.path(), &["spec", "breaking.json", "--dot", "spec.dot"]);
    assert_eq!(
        first,
        fs::read_to_string(dir.path().join("spec.dot")).unwrap()
    );

    let out = lpa(dir.path(), &["pairs", "loop.json", "--dot", "pairs.dot"]);
    assert!(out.status.success());
    assert!(dir.path().join("pairs.dot").exists());
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let dir = setup();
    // Unknown subcommand: usage error 2 (from the argument parser).
    let out = lpa(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed document: 3.
    fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    let out = lpa(dir.path(), &["hss", "bad.json"]);
    assert_eq!(out.status.code(), Some(3));
    // Semantically invalid document: 3.
    fs::write(dir.path().join("badpair.json"), r#"{"H":["w"],"S":[]}"#).unwrap();
    let out = lpa(
        dir.path(),
        &["quotient", "breaking.json", "--pair", "badpair.json"],
    );
    assert_eq!(out.status.code(), Some(3));
    // Cap exceeded: 4, and the LPA_CAP variable is honored.
    let out = lpa_env(dir.path(), &["pairs", "breaking.json"], "LPA_CAP", "2");
    assert_eq!(out.status.code(), Some(4));
    // Unsupported operand shape: 1.
    fs::write(
        dir.path().join("gr.json"),
        r#"{"H":[],"S":[],"field":{"p":2}}"#,
    )
    .unwrap();
    fs::write(
        dir.path().join("poly.json"),
        r#"{"H":[],"S":[],"polyparts":[{"cycle":["v"],"f":"x+1"}],"field":{"p":2}}"#,
    )
    .unwrap();
    let out = lpa(
        dir.path(),
        &["intersect", "loop.json", "gr.json", "poly.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    // Missing file: 1.
    let out = lpa(dir.path(), &["hss", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_reports_clean_counts() {
    let dir = setup();
    let out = lpa(
        dir.path(),
        &["sweep", "--max-vertices", "2", "--mults", "0,1,inf"],
    );
    let v = stdout_json(&out);
    assert!(v["classes"].as_u64().unwrap() > 0);
    assert_eq!(v["condition_k_equivalence"]["mismatches"], 0);
    assert_eq!(v["regularity_equivalence"]["mismatches"], 0);
    assert_eq!(v["kaplansky"]["failures"], 0);
}
