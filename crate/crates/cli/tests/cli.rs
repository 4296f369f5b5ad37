use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use mumford_core::lattice_group::parse_similitudes;
use mumford_core::MatK;
use serde_json::Value;

fn mumford(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mumford")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--json", p]);
    let out = mumford(&full);
    let text = std::fs::read_to_string(&path).expect("report written");
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

fn schema() -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&s).expect("schema compiles")
}

fn assert_valid(report: &Value) {
    let schema = schema();
    let msgs: Vec<String> = match schema.validate(report) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    panic!("report does not match schema: {msgs:?}");
}

fn ids(report: &Value) -> Vec<&str> {
    report["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect()
}

fn status<'a>(report: &'a Value, id: &str) -> &'a str {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("no check {id}"))["status"]
        .as_str()
        .unwrap()
}

#[test]
fn filter_selects_by_prefix() {
    let (code, r) = run_json(&["verify", "--filter", "Lemma-2.3"]);
    assert_valid(&r);
    assert_eq!(ids(&r), ["Lemma-2.3.1", "Lemma-2.3.2-charpoly", "Lemma-2.3.2-signature"]);
    assert_eq!(status(&r, "Lemma-2.3.2-charpoly"), "PASS");
    // the printed signature holds only under the conjugate embedding
    assert_eq!(status(&r, "Lemma-2.3.2-signature"), "FAIL");
    assert_eq!(r["checks"][2]["witness"]["signature_epsilon"], serde_json::json!([2, 1]));
    assert_eq!(r["checks"][2]["witness"]["signature_conjugate_embedding"], serde_json::json!([1, 2]));
    assert_eq!(code, 1);
}

#[test]
fn unknown_filter_gives_empty_report() {
    let (code, r) = run_json(&["verify", "--filter", "nonexistent"]);
    assert_valid(&r);
    assert_eq!(code, 0);
    assert!(ids(&r).is_empty());
    assert_eq!(r["summary"]["total"], 0);
}

#[test]
fn reports_are_deterministic_outside_the_header() {
    let args = ["verify", "--filter", "Sec-3", "--seed", "5"];
    let (c1, mut a) = run_json(&args);
    let (c2, mut b) = run_json(&args);
    assert_valid(&a);
    assert_eq!((c1, c2), (0, 0));
    a.as_object_mut().unwrap().remove("header");
    b.as_object_mut().unwrap().remove("header");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["config"]["seed"], 5);
}

#[test]
fn full_verify_fails_only_on_the_recorded_conflicts() {
    let (code, r) = run_json(&["verify"]);
    assert_valid(&r);
    assert_eq!(code, 1);
    let checks = r["checks"].as_array().unwrap();
    let with = |s: &str| -> Vec<&str> {
        checks.iter().filter(|c| c["status"] == s).map(|c| c["id"].as_str().unwrap()).collect()
    };
    assert_eq!(with("FAIL"), ["Sec-2.2-Positivity-bigstar", "Lemma-2.3.2-signature"]);
    assert_eq!(with("PAPER-TRUSTED").len(), 7);
    assert!(with("SKIPPED").is_empty());
    assert_eq!(r["summary"]["pass"], checks.len() - 9);
    let mut seen = std::collections::BTreeSet::new();
    for c in checks {
        assert!(seen.insert(c["id"].as_str().unwrap()), "duplicate id");
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn building_radius_zero_is_trivial() {
    let (code, r) = run_json(&["building", "--radius", "0", "--factors", "1"]);
    assert_valid(&r);
    assert_eq!(code, 0);
    let w = &r["checks"][1]["witness"];
    assert_eq!(w["table"], serde_json::json!([{ "distance": 0, "vertices": 1, "reached": 1 }]));
}

#[test]
fn building_radius_one_reaches_all_neighbours() {
    let (code, r) = run_json(&["building", "--radius", "1", "--factors", "1,2"]);
    assert_valid(&r);
    assert_eq!(code, 0);
    assert_eq!(r["checks"][0]["witness"]["ball_size"], 15);
    assert_eq!(status(&r, "Thm-3.6-transitivity"), "PASS");
    assert_eq!(status(&r, "Thm-3.6-stabilizers"), "PASS");
    assert_eq!(r["checks"][1]["witness"]["witnesses"].as_array().unwrap().len(), 15);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(mumford(&["building", "--radius", "4"]).status.code(), Some(2));
    assert_eq!(mumford(&["building", "--radius", "2", "--max-radius", "1"]).status.code(), Some(2));
    assert_eq!(mumford(&["building", "--factors", "3"]).status.code(), Some(2));
    assert_eq!(mumford(&["enumerate", "--factor", "6"]).status.code(), Some(2));
    assert_eq!(mumford(&["frobnicate"]).status.code(), Some(2));
    let out = mumford(&["enumerate", "--factor", "1", "--output", "/nonexistent-dir/x.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_is_byte_identical_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = mumford(&["enumerate", "--factor", "2", "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let list = parse_similitudes(std::str::from_utf8(&ta).unwrap()).unwrap();
    assert_eq!(list.len(), 672);

    let out = mumford(&["enumerate", "--factor", "1"]);
    assert!(out.status.success());
    let list = parse_similitudes(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(list.iter().any(|g| *g.matrix() == MatK::identity()));
    assert!(list.iter().any(|g| *g.matrix() == -MatK::identity()));
}
