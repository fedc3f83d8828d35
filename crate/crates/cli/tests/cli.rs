use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobjlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--report", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (code, value)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, value: &Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_vec_pretty(value).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn chain_is_not_wmaltsev() {
    let (code, report) = json(&[
        "wmaltsev",
        &fixture("chain2.json"),
        "--quantale",
        &fixture("two.json"),
        "--method",
        "direct",
    ]);
    assert_eq!(code, 1);
    assert_eq!(report["headline"], false);
    let w = &report["witnesses"][0];
    assert_eq!((w["x"].as_str(), w["y"].as_str(), w["z"].as_str()), (Some("b"), Some("a"), Some("a")));
    assert_eq!(report["inputs"].as_object().unwrap().len(), 2);
}

#[test]
fn all_methods_agree_on_fixtures() {
    for (file, expected) in [("chain2.json", 1), ("indiscrete2.json", 0), ("ultrametric3.json", 0), ("metric3.json", 1)] {
        for method in ["direct", "structural", "factorization", "hom"] {
            let out = run(&["wmaltsev", &fixture(file), "--method", method, "--bound", "2"]);
            assert_eq!(out.status.code(), Some(expected), "{file} {method}");
        }
    }
}

#[test]
fn counterexample_manifest_revalidates() {
    let (code, report) = json(&["maltsev", "counterexample", "--quantale", &fixture("c3plus.json")]);
    assert_eq!(code, 0);
    let w = &report["witnesses"][0];
    assert_eq!(w["reason"], "not_reflecting");
    assert_eq!((w["from"].as_str(), w["to"].as_str()), (Some("0"), Some("2")));
    assert_eq!((w["source_value"].as_str(), w["target_value"].as_str()), (Some("2"), Some("1")));
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_temp(&dir, "diagram.json", &report["output"]);
    let (code, again) = json(&["maltsev", "counterexample", "--quantale", "C3+", "--diagram", &manifest]);
    assert_eq!(code, 0);
    assert_eq!(again["witnesses"][0], *w);
}

#[test]
fn cartesian_quantale_has_no_counterexample() {
    assert_eq!(run(&["maltsev", "counterexample", "--quantale", "max4"]).status.code(), Some(1));
    let out = run(&["maltsev", "counterexample", "--quantale", "max4", "--u", "1", "--v", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_relation_is_difunctional() {
    assert_eq!(run(&["rel", "difunctional", &fixture("empty_relation.json")]).status.code(), Some(0));
    assert_eq!(run(&["rel", "difunctional", &fixture("zigzag_relation.json")]).status.code(), Some(1));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["rel", "difunctional", "--bogus", "x"]).status.code(), Some(2));
    assert_eq!(run(&["rel", "difunctional", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["vcat", "verify", &fixture("chain2.json"), "--quantale", "nope"]).status.code(), Some(2));
    let out = run(&["wmaltsev", &fixture("chain2.json"), "--method", "hom", "--bound", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["vcat", "pushout", &fixture("span_glue.json")];
    let (_, mut a) = json(&args);
    let (_, mut b) = json(&args);
    a.as_object_mut().unwrap().remove("timing");
    b.as_object_mut().unwrap().remove("timing");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let text = serde_json::to_string_pretty(&a).unwrap();
    let back: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
}

#[test]
fn constructed_objects_verify() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["vcat", "product", &fixture("chain2.json"), &fixture("indiscrete2.json")],
        vec!["vcat", "coproduct", &fixture("chain2.json"), &fixture("indiscrete2.json")],
        vec!["vcat", "pushout", &fixture("span_glue.json")],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, report) = json(&refs);
        assert_eq!(code, 0);
        let path = write_temp(&dir, "object.json", &report["output"]["object"]);
        assert_eq!(run(&["vcat", "verify", &path]).status.code(), Some(0), "{args:?}");
    }
    let (code, report) = json(&["vcat", "factorize", &fixture("functor_collapse.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["output"]["epi"], "{a->p, b->p, c->q}");
    let path = write_temp(&dir, "image.json", &report["output"]["image"]);
    assert_eq!(run(&["vcat", "verify", &path]).status.code(), Some(0));
}

#[test]
fn pushout_glues_point_to_chain() {
    let (_, report) = json(&["vcat", "pushout", &fixture("span_glue.json")]);
    let object = &report["output"]["object"];
    assert_eq!(object["objects"], serde_json::json!(["x", "z"]));
    assert_eq!(object["hom"]["x"]["z"], "1");
    assert_eq!(object["hom"]["z"]["x"], "0");
}

#[test]
fn monoid_witness_revalidates() {
    let (code, report) = json(&["monoid", "witness", &fixture("z3.json"), "--element", "1"]);
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "witness.json", &report["witnesses"][0]);
    let out = run(&["monoid", "witness", &fixture("z3.json"), "--element", "1", "--verify", &path]);
    assert_eq!(out.status.code(), Some(0));
    let bad = write_temp(&dir, "bad.json", &serde_json::json!({"x": "1", "triples": [["1", "1", "1"]]}));
    let out = run(&["monoid", "witness", &fixture("z3.json"), "--element", "1", "--verify", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["monoid", "check", &fixture("bool_and.json")]).status.code(), Some(1));
    assert_eq!(run(&["monoid", "check", &fixture("z3.json")]).status.code(), Some(0));
}

#[test]
fn quantale_commands() {
    assert_eq!(run(&["quantale", "verify", &fixture("c3plus.json")]).status.code(), Some(0));
    let (code, report) = json(&["quantale", "verify", &fixture("bad_chain.json")]);
    assert_eq!(code, 1);
    assert!(report["witnesses"][0]["axiom"].is_string());
    assert_eq!(run(&["quantale", "cartesian", "max4"]).status.code(), Some(0));
    let (code, report) = json(&["quantale", "cartesian", "L4"]);
    assert_eq!(code, 1);
    assert_eq!(report["witnesses"][0]["tensor"], "0");
}

#[test]
fn ordgrp_and_uv() {
    assert_eq!(run(&["ordgrp", "check", &fixture("int_nonneg.json")]).status.code(), Some(1));
    assert_eq!(run(&["ordgrp", "check", &fixture("int_even.json")]).status.code(), Some(0));
    assert_eq!(run(&["ordgrp", "check", &fixture("z4_even.json")]).status.code(), Some(0));
    assert_eq!(run(&["uv", "verify", &fixture("sierpinski.json")]).status.code(), Some(0));
    assert_eq!(run(&["uv", "check", &fixture("sierpinski.json")]).status.code(), Some(1));
}

#[test]
fn maltsev_verdicts() {
    let (code, report) = json(&["maltsev", "verdict", &fixture("metric3.json"), "--quantale", "C3+"]);
    assert_eq!(code, 1);
    assert!(report["witnesses"][0]["diagram"].is_object());
    let out = run(&["maltsev", "verdict", &fixture("indiscrete2.json"), "--quantale", "2", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("undetermined"));
}

#[test]
fn sweep_single_suite_with_thread_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_mobjlab"))
        .args(["sweep", "--suite", "non-cartesian-collapse"])
        .env("MOBJLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["sweep", "--suite", "42"]).status.code(), Some(2));
}
