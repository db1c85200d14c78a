use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use boij_core::io::parse_betti_table;
use boij_core::io::parse_monomial_module;
use boij_core::koszul::koszul_betti;
use serde_json::Value;

fn boij(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boij")).current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn outside_verdicts_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("point.txt"), "0 0 1\n").unwrap();
    let out = boij(dir.path(), &["member", "--codim", "@0:1,inf", "point.txt"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["result"]["inside"], false);
    assert_eq!(doc["result"]["verified"], true);
    assert_eq!(doc["schema_version"], 1);
}

#[test]
fn errors_exit_nonzero_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("dup.txt"), "0 0 1\n0 0 2\n").unwrap();
    let out = boij(dir.path(), &["member", "--codim", "const:1", "dup.txt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));

    let out = boij(dir.path(), &["bounds", "dup.txt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage: boij bounds"));

    fs::write(dir.path().join("job.json"), r#"{"command": "dims", "inputs": ["m.json"], "verbose": true}"#)
        .unwrap();
    let out = boij(dir.path(), &["run", "job.json"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn warnings_go_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.json"), r#"{"d":2,"summands":[{"gens":[[1,0],[2,0]],"twist":0}]}"#).unwrap();
    let out = boij(dir.path(), &["koszul", "m.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-minimal"));
    assert_eq!(parse_betti_table(&String::from_utf8_lossy(&out.stdout)).unwrap().value.len(), 2);
}

#[test]
fn degree_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.json"), r#"{"d":2,"summands":[{"gens":[[4,0],[0,4]]}]}"#).unwrap();
    let capped = Command::new(env!("CARGO_BIN_EXE_boij"))
        .current_dir(dir.path())
        .env("BOIJ_DEGREE_CAP", "3")
        .args(["koszul", "m.json"])
        .output()
        .unwrap();
    assert!(!capped.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_boij"))
        .current_dir(dir.path())
        .env("BOIJ_DEGREE_CAP", "lots")
        .args(["koszul", "m.json"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&bad.stderr).contains("BOIJ_DEGREE_CAP"));
    assert!(boij(dir.path(), &["koszul", "m.json"]).status.success());
}

#[test]
fn batch_matches_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = boij(dir.path(), &["corpus", "--seed", "5", "--count", "12", "--out", "corpus"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = boij(dir.path(), &["batch", "--command", "koszul", "--dir", "corpus", "--out", "results"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&out);
    assert_eq!(summary["files"], 12);
    assert_eq!(summary["failed"], 0);

    for entry in fs::read_dir(&corpus).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let batch = fs::read(dir.path().join("results").join(format!("{name}.koszul.json"))).unwrap();
        let single = boij(dir.path(), &["koszul", &format!("corpus/{name}")]);
        assert_eq!(batch, single.stdout, "{name}");
        let module = parse_monomial_module(&fs::read_to_string(&path).unwrap()).unwrap().value;
        let table = parse_betti_table(&String::from_utf8_lossy(&batch)).unwrap().value;
        assert_eq!(table, koszul_betti(&module).unwrap());
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = boij(dir.path(), &["cohom", "--m", "1", "--line", "5", "-o", "c.json"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    let h00 = doc["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["i"] == 0 && e["t"] == 0)
        .unwrap()
        .clone();
    assert_eq!(h00["value"], "6");
    assert_eq!(doc["result"]["ulrich"]["ulrich"], false);
}
