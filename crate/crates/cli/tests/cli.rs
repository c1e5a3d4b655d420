use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ascent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ascent"))
        .args(args)
        .env_remove("ASCENT_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn indices_of_lemma_matrix() {
    let dir = tempfile::tempdir().unwrap();
    // T_a C_a T_a for a = 2
    let m = write(
        dir.path(),
        "m.json",
        r#"{"field":"Q","rows":3,"cols":3,"entries":[["0","1","1"],["1","1","1"],["-1","-1","-1"]]}"#,
    );
    let out = ascent(&["indices", &m]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["ascent"].as_u64(), v["descent"].as_u64()), (Some(3), Some(3)));
    assert_eq!(v["minpoly"], "x^3");

    let id = write(dir.path(), "i.json", r#"{"field":"GF(5)","rows":3,"cols":3,"entries":[[1,0,0],[0,1,0],[0,0,1]]}"#);
    assert_eq!(json(&ascent(&["indices", &id]))["ascent"], 0);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"field\": ");
    let out = ascent(&["indices", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
    let rect = write(dir.path(), "r.json", r#"{"field":"Q","rows":1,"cols":2,"entries":[["1","2"]]}"#);
    assert_eq!(ascent(&["indices", &rect]).status.code(), Some(2));
    assert_eq!(ascent(&["indices", "/nonexistent/m.json"]).status.code(), Some(2));
    assert_eq!(ascent(&["lemma", "nope"]).status.code(), Some(2));
    assert_eq!(ascent(&["lemma", "12", "--u", "1", "--v", "1"]).status.code(), Some(2));
    assert_eq!(ascent(&["lemma", "list", "--a", "2"]).status.code(), Some(2));
    assert_eq!(ascent(&["exhaustive", "pencil", "--field", "GF(3)", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(ascent(&["exhaustive", "zero-char", "--field", "Q", "--dim", "2"]).status.code(), Some(2));
    assert_eq!(ascent(&["exhaustive", "bogus", "--field", "GF(2)", "--dim", "2"]).status.code(), Some(2));
}

#[test]
fn lemma_commands() {
    let out = ascent(&["lemma", "list", "--a", "2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["holds"] == true));

    let v = json(&ascent(&["lemma", "13", "--a", "0", "--b", "1", "--w", "1"]));
    assert_eq!(v["inputs"]["t0"], "-1");
    assert_eq!(v["verified"], true);

    assert_eq!(ascent(&["lemma", "12", "--u", "-2", "--v", "3"]).status.code(), Some(0));
    assert_eq!(ascent(&["lemma", "125"]).status.code(), Some(0));
    assert_eq!(ascent(&["lemma", "125", "--field", "GF(5)"]).status.code(), Some(0));
    assert_eq!(ascent(&["lemma", "13", "--a", "0", "--b", "0", "--w", "2"]).status.code(), Some(0));
}

#[test]
fn lemmas_over_finite_fields() {
    let out = ascent(&["lemma", "list", "--field", "GF(4)", "--a", "w", "--b", "1+w"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["field"], "GF(4)");
    assert_eq!(ascent(&["lemma", "12", "--field", "GF(7)", "--u", "3", "--v", "5"]).status.code(), Some(0));
    // both need an inverse of 2
    assert_eq!(ascent(&["lemma", "125", "--field", "GF(2)"]).status.code(), Some(2));
    assert_eq!(ascent(&["lemma", "13", "--field", "GF(4)", "--a", "0", "--b", "1", "--w", "1"]).status.code(), Some(2));
}

#[test]
fn exhaustive_sweeps() {
    let out = ascent(&["exhaustive", "rank-one-forward", "--field", "GF(2)", "--dim", "3", "--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["record"], "summary");
    assert_eq!(last["status"], "verified");
    assert_eq!(last["quantifier_range"], 512);
    assert_eq!(last["total_a_tested"], 49);

    let out = ascent(&["exhaustive", "zero-char", "--field", "GF(3)", "--dim", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["total_a_tested"].as_u64().unwrap() * last["quantifier_range"].as_u64().unwrap(), 6561);

    // experiment: findings are reported either way, never a failure
    let out = ascent(&["exhaustive", "rank-one-converse", "--field", "GF(2)", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn pencil_findings_are_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("findings.jsonl");
    let out = ascent(&["--out", path.to_str().unwrap(), "exhaustive", "pencil", "--field", "GF(3)", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, findings) = lines.split_last().unwrap();
    assert_eq!(summary["status"], "finding");
    assert_eq!(findings.len() as u64, summary["converse_gaps"].as_u64().unwrap());
    assert!(findings.iter().all(|f| f["record"] == "converse_gap" && f["subject_index"].as_array().unwrap().len() == 2));
}

#[test]
fn sweep_output_is_independent_of_workers() {
    let run = |jobs: &str| ascent(&["--jobs", jobs, "exhaustive", "sim", "--field", "GF(3)", "--dim", "2"]).stdout;
    assert_eq!(run("1"), run("4"));
    let with_env = Command::new(env!("CARGO_BIN_EXE_ascent"))
        .args(["exhaustive", "sim", "--field", "GF(3)", "--dim", "2"])
        .env("ASCENT_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(with_env.stdout, run("1"));
}

const CONJ: &str = r#"{"form":"conjugation","conjugator":{"field":"Q","rows":3,"cols":3,"entries":[["1","2","0"],["0","1","-1/2"],["3","0","1"]]},"automorphism":"identity","lambda_seed":17}"#;

#[test]
fn preserver_verification() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "conj.json", CONJ);
    let out = ascent(&["preserver", &spec, "--seed", "4", "--pairs", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pairs_tested"], 1000);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let tr = write(
        dir.path(),
        "tr.json",
        r#"{"form":"transpose_conjugation","conjugator":{"field":"GF(2)","rows":2,"cols":2,"entries":[[0,1],[1,1]]},"automorphism":"identity","lambda_seed":3}"#,
    );
    let v = json(&ascent(&["preserver", &tr, "--mode", "exhaustive"]));
    assert_eq!(v["pairs_tested"], 256);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);

    let frob = write(
        dir.path(),
        "frob.json",
        r#"{"form":"conjugation","conjugator":{"field":"GF(9)","rows":2,"cols":2,"entries":[[[0,1],1],[0,1]]},"automorphism":"frobenius","lambda_seed":9}"#,
    );
    assert_eq!(ascent(&["preserver", &frob, "--pairs", "300"]).status.code(), Some(0));
}

#[test]
fn preserver_violations() {
    let dir = tempfile::tempdir().unwrap();
    let shift = write(
        dir.path(),
        "shift.json",
        &CONJ.replace("\"lambda_seed\":17", "\"lambda_seed\":17,\"perturbation\":{\"kind\":\"shift\",\"u\":\"1\"}"),
    );
    let out = ascent(&["preserver", &shift, "--violate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["probes_tried"].as_u64().unwrap() <= 10);
    assert!(v["violation"].is_object());
    assert_eq!(ascent(&["preserver", &shift, "--pairs", "50"]).status.code(), Some(1));

    // a canonical map has nothing to find
    let spec = write(dir.path(), "conj.json", CONJ);
    let out = ascent(&["preserver", &spec, "--violate", "--budget", "300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["violation"].is_null());
}

#[test]
fn preserver_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let singular = write(
        dir.path(),
        "s.json",
        r#"{"form":"conjugation","conjugator":{"field":"Q","rows":2,"cols":2,"entries":[["1","2"],["2","4"]]},"automorphism":"identity","lambda_seed":1}"#,
    );
    assert_eq!(ascent(&["preserver", &singular]).status.code(), Some(2));
    let frob_q = write(
        dir.path(),
        "f.json",
        r#"{"form":"conjugation","conjugator":{"field":"Q","rows":1,"cols":1,"entries":[["1"]]},"automorphism":"frobenius","lambda_seed":1}"#,
    );
    assert_eq!(ascent(&["preserver", &frob_q]).status.code(), Some(2));
    let spec = write(dir.path(), "conj.json", CONJ);
    assert_eq!(ascent(&["preserver", &spec, "--mode", "exhaustive"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "conj.json", CONJ);
    let a = ascent(&["preserver", &spec, "--seed", "11", "--pairs", "200"]).stdout;
    let b = ascent(&["--jobs", "2", "preserver", &spec, "--seed", "11", "--pairs", "200"]).stdout;
    assert_eq!(a, b);
    let c = ascent(&["preserver", &spec, "--seed", "12", "--pairs", "200"]).stdout;
    assert_ne!(a, c);
}
