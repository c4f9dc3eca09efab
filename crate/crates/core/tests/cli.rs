use std::path::PathBuf;

use serde_json::{json, Value};
use ssetkit::cli::run;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ssetkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(std::iter::once("ssetkit").chain(args.iter().copied()));
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn ok_json(args: &[&str]) -> Value {
    let mut v = args.to_vec();
    v.extend(["--format", "json"]);
    serde_json::from_str(&ok(&v)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("ssetkit").chain(args.iter().copied())).0
}

fn write(name: &str, v: &Value) -> String {
    let p = scratch(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn face(cell: &str) -> Value {
    json!({"cell": cell, "op": [0]})
}

fn triangle(faces: [&str; 3]) -> Value {
    let edge = |id: &str, a: &str, b: &str| json!({"id": id, "dim": 1, "faces": [face(b), face(a)]});
    json!({
        "name": "T",
        "cells": [
            {"id": "a", "dim": 0, "faces": []},
            {"id": "b", "dim": 0, "faces": []},
            {"id": "c", "dim": 0, "faces": []},
            edge("ab", "a", "b"),
            edge("bc", "b", "c"),
            edge("ac", "a", "c"),
            {"id": "abc", "dim": 2, "faces": faces.iter().map(|f| json!({"cell": f, "op": [0, 1]})).collect::<Vec<_>>()},
        ]
    })
}

#[test]
fn new_then_validate() {
    let d2 = ok_json(&["new", "simplex", "2"]);
    assert_eq!(d2["cells"].as_array().unwrap().len(), 7);
    let path = write("d2.json", &d2);
    assert_eq!(ok(&["validate", "--object", &path]), "ok\n");
}

#[test]
fn validation_reports_the_offending_cell() {
    let good = write("good.json", &triangle(["bc", "ac", "ab"]));
    assert_eq!(ok(&["validate", "--object", &good]), "ok\n");
    let bad = write("bad.json", &triangle(["ac", "bc", "ab"]));
    let v = ok_json(&["validate", "--object", &bad]);
    assert_eq!(v["ok"], false);
    assert_eq!(code(&["validate", "--object", &bad, "--strict"]), 2);
}

#[test]
fn replacement_file_certifies() {
    let eps = ok_json(&["replace", "--object", "std:point", "--bound", "3"]);
    let path = write("eps.json", &eps);
    let cert = ok_json(&["certify", "--map", &path, "--generators", "boundaries", "--bound", "3"]);
    assert_eq!(cert["verdict"], "pass");
    assert_eq!(code(&["certify", "--map", &path, "--bound", "4"]), 3);
    let mut tampered = eps.clone();
    tampered["dims"]["1"] = json!([]);
    let path = write("tampered.json", &tampered);
    assert_eq!(code(&["certify", "--map", &path, "--bound", "2"]), 1);
}

#[test]
fn univalence_verdicts() {
    let fold = write("fold.json", &ok_json(&["new", "fold"]));
    let v = ok_json(&["univalent", "--fibration", &fold, "--bound", "0"]);
    assert_eq!(v["verdict"], "not-univalent");
    assert_eq!(code(&["univalent", "--fibration", &fold, "--bound", "0", "--strict"]), 2);
    let v = ok_json(&["univalent", "--fibration", "std:identity:std:point", "--bound", "2", "--strict"]);
    assert_eq!(v["verdict"], "univalent");
}

#[test]
fn kan_failure_is_reported_with_evidence() {
    let v = ok_json(&["certify", "--map", "std:to-point:std:simplex:1", "--generators", "horns"]);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["evidence"]["generator"], "Λ0[2]");
}

#[test]
fn plain_maps_resolve_against_loaded_objects() {
    let bundle = ok_json(&["new", "vertex", "1", "0"]);
    let objects = bundle["objects"].as_array().unwrap();
    let a = write("a.json", &objects[0]);
    let b = write("b.json", &objects[1]);
    let m = write("m.json", &bundle["map"]);
    assert_eq!(code(&["show", "--map", &m]), 1);
    let shown = ok_json(&["show", "--map", &m, "--load", &a, "--load", &b]);
    assert_eq!(shown["cofibration"], true);
}

#[test]
fn constructions_emit_json() {
    let pb = ok_json(&["pullback", "--f", "std:fold", "--g", "std:to-point:std:simplex:1"]);
    assert_eq!(pb["objects"][0]["cells"].as_array().unwrap().len(), 6);
    let lr = ok_json(&["factor-lr", "--map", "std:to-point:std:circle"]);
    assert_eq!(lr["checks"], json!({"recomposes": true, "quotient": true, "detecting": true}));
    let path = ok_json(&["path", "--object", "std:nerve:2:3", "--bound", "1"]);
    assert_eq!(path["boundary_after_r_is_diagonal"], true);
    let ext = ok_json(&["extend", "--f", "std:boundary-inclusion:1", "--q", "std:identity:std:boundary:1", "--bound", "2"]);
    assert_eq!(ext["counit_iso"], true);
    let classify = ok_json(&["classify", "--fibration", "std:to-point:std:nerve:2:3", "--structure", "horns"]);
    assert_eq!(classify["report"]["passed"], true, "{classify}");
    let lift = ok_json(&[
        "lift",
        "--left",
        "std:boundary-inclusion:1",
        "--right",
        "std:to-point:std:simplex:1",
        "--top",
        "std:boundary-inclusion:1",
        "--bottom",
        "std:to-point:std:simplex:1",
    ]);
    assert_eq!(lift["verdict"], "pass");
}

#[test]
fn corpus_is_deterministic() {
    let a = ok(&["corpus", "--count", "5", "--maps", "3", "--seed", "9", "--format", "json"]);
    assert_eq!(a, ok(&["corpus", "--count", "5", "--maps", "3", "--seed", "9", "--format", "json"]));
    assert_ne!(a, ok(&["corpus", "--count", "5", "--maps", "3", "--seed", "10", "--format", "json"]));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["validate", "--object", "std:horn:2:5"]), 1);
    assert_eq!(code(&["show", "--object", "/nonexistent/x.json"]), 1);
    assert_eq!(code(&["certify", "--map", "std:fold", "--generators", "cubes"]), 1);
}
