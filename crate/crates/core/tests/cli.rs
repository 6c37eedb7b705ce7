use std::path::PathBuf;

use godeaux_lines::cli::{run_with, EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, FIELD_ENV};
use godeaux_lines::families::z5::example_line;
use godeaux_lines::field::FieldSpec;
use godeaux_lines::store::{LineRecord, LineStore};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("godeaux-lines").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("godeaux-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    let _ = std::fs::remove_file(&p);
    p
}

#[test]
fn every_verifier_passes() {
    for t in ["hyp-param", "para-v2", "z5-family", "z3-param", "z3-kernel", "torsion-spaces", "symmetries"] {
        let (code, out, err) = run(&["verify", t, "--field", "q", "--points", "3"]);
        assert_eq!(code, EXIT_OK, "{t}: {err}\n{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], Value::Bool(true), "{t}");
    }
}

#[test]
fn verifiers_over_a_prime_field() {
    let (code, _, err) = run(&["verify", "hyp-param", "--field", "p10007", "--points", "5"]);
    assert_eq!(code, EXIT_OK, "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["verify", "no-such-theorem"]).0, EXIT_USAGE);
    assert_eq!(run(&["sample", "--strategy", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(run(&["sample", "--field", "p32"]).0, EXIT_USAGE);
    assert_eq!(run(&["components", "--pair", "01|23,01|23"]).0, EXIT_USAGE);
    assert_eq!(run(&["classify", "--in", "/nonexistent/store.json"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn sample_to_stdout_and_classify() {
    let (code, out, _) = run(&["sample", "--strategy", "torsion:02|13", "--field", "p31", "--seed", "5"]);
    assert_eq!(code, EXIT_OK);
    let store = LineStore::from_text(&out).unwrap();
    assert_eq!(store.records.len(), 1);
    let path = temp("stdout.json");
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = run(&["classify", "--in", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    let hits = v["report"]["torsion_points"].as_array().unwrap();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["space"], "02|13");
}

#[test]
fn sample_appends_to_existing_store() {
    let path = temp("append.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["sample", "--seed", "1", "--count", "2", "--out", p]).0, EXIT_OK);
    assert_eq!(run(&["sample", "--seed", "3", "--out", p]).0, EXIT_OK);
    assert_eq!(LineStore::load(&path).unwrap().records.len(), 3);
}

#[test]
fn classify_empty_store() {
    let path = temp("empty.json");
    LineStore::default().save(&path).unwrap();
    let (code, out, _) = run(&["classify", "--in", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
}

#[test]
fn classify_reports_bad_records_individually() {
    let mut store = LineStore::default();
    store.push(&LineRecord::from_line(example_line(FieldSpec::Rational), "example").unwrap());
    // a line that is not in Q
    let mut bad = store.records[0].clone();
    bad["rows"][0][0] = Value::String("1".into());
    bad["rows"][1][0] = Value::String("1".into());
    store.records.push(bad);
    let path = temp("mixed.json");
    store.save(&path).unwrap();
    let (code, out, _) = run(&["classify", "--in", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].get("report").is_some());
    assert!(lines[1].get("error").is_some());
    assert_eq!(lines[1]["index"], 1);
}

#[test]
fn components_output() {
    let (code, out, _) = run(&["components", "--pair", "01|23,03|12"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    let (code, out, _) = run(&["components"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    for pair in v.as_array().unwrap() {
        let counts = &pair["counts"];
        assert_eq!(counts["P1xP1"], 6, "{pair}");
        assert_eq!(counts["P0xP2"], 4);
        assert_eq!(counts["P2xP0"], 4);
    }
}

#[test]
fn budget_exhaustion_exit_code() {
    let (code, out, err) = run(&["sample", "--strategy", "hyp", "--budget", "1"]);
    assert_eq!(code, EXIT_BUDGET, "{err}");
    let store = LineStore::from_text(&out).unwrap();
    assert!(store.records.is_empty());
    assert_eq!(store.failures.len(), 1);
}

#[test]
fn large_field_needs_cutoff() {
    let (code, _, err) = run(&["sample", "--strategy", "hyp", "--field", "p10007"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("10007"), "{err}");
}

#[test]
fn field_from_environment() {
    std::env::set_var(FIELD_ENV, "p37");
    let (code, out, _) = run(&["sample", "--seed", "2"]);
    std::env::remove_var(FIELD_ENV);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"37\""), "{out}");
}
