use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use forge_core::json::{from_json, to_json};
use forge_core::presets::chain_semilattice;
use forge_core::FiniteStructure;
use serde_json::Value;
use tempfile::TempDir;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn build(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["build", "--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = forge(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

#[test]
fn build_writes_stages_and_manifest() {
    let dir = TempDir::new().unwrap();
    let out = build(dir.path(), &["--class", "graph", "--root", "edgeless:2", "--stages", "1", "--max-base", "2"]);
    let manifest = stdout_json(&out);
    assert_eq!(manifest["outcome"]["stage_sizes"], serde_json::json!([2, 11]));
    assert_eq!(manifest["outcome"]["catalog_sizes"], serde_json::json!([9]));
    for name in ["stage_0.json", "stage_1.json", "catalog_0.json", "manifest.json"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let f1 = from_json(&fs::read_to_string(dir.path().join("stage_1.json")).unwrap()).unwrap();
    assert_eq!(f1.len(), 2 + 9);
    assert!(f1.is_valid());
}

#[test]
fn build_metric_stages_are_valid() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--class", "metric", "--root", "simplex:3:1", "--stages", "1", "--grid", "1,2"]);
    for n in 0..=1 {
        let s = from_json(&fs::read_to_string(dir.path().join(format!("stage_{n}.json"))).unwrap()).unwrap();
        assert!(s.is_valid());
    }
    let out = forge(&["verify", "--suite", "axioms", "--chain", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn zero_stages_echo_the_root() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--root", "antichain:3", "--stages", "0"]);
    let s = fs::read_to_string(dir.path().join("stage_0.json")).unwrap();
    let root = forge_core::presets::antichain(3).unwrap();
    assert_eq!(s, to_json(&root));
    assert!(!dir.path().join("stage_1.json").exists());
}

#[test]
fn mismatched_class_is_a_usage_error() {
    let out = forge(&["build", "--class", "poset", "--root", "edgeless:2", "--out", "/nonexistent/never"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--class"));
}

#[test]
fn unknown_preset_is_reported() {
    let out = forge(&["lift", "--root", "torus:3", "--map", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("torus:3"));
}

#[test]
fn unknown_suite_is_rejected() {
    let out = forge(&["verify", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_built_chain() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--root", "edgeless:2"]);
    let chain = dir.path().to_str().unwrap();
    for suite in ["axioms", "homogeneity", "extension-property"] {
        let out = forge(&["verify", "--suite", suite, "--chain", chain]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stderr));
        let doc = stdout_json(&out);
        assert_eq!(doc["passed"], true);
        assert_eq!(doc["reports"][0]["suite"], "manifest-hashes");
    }
}

#[test]
fn tampered_stage_fails_verification() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--root", "edgeless:2"]);
    let path = dir.path().join("stage_1.json");
    let mut s = from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    let keep: Vec<usize> = (0..s.len() - 1).collect();
    s = s.induced_substructure(&keep).unwrap();
    fs::write(&path, to_json(&s)).unwrap();

    let out = forge(&["verify", "--suite", "homogeneity", "--chain", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], false);
    let reports = doc["reports"].as_array().unwrap();
    assert!(!reports[0]["failures"].as_array().unwrap().is_empty());
    assert!(!reports[1]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn functoriality_on_two_points() {
    let out = forge(&["verify", "--suite", "functoriality", "--root", "edgeless:2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let pairs = &doc["reports"][0];
    assert_eq!(pairs["checked"], 16);
    assert_eq!(pairs["passed"], 16);
}

#[test]
fn pushout_oracle_for_small_graphs() {
    let out = forge(&["verify", "--suite", "pushout-oracle", "--class", "graph", "--max-size", "2", "--object-size", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pass"));
}

#[test]
fn report_is_also_written_to_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let out = forge(&["verify", "--suite", "cayley", "--class", "graph", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn lift_prints_components() {
    let out = forge(&["lift", "--root", "edgeless:2", "--map", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["catalog_size"], 9);
    assert_eq!(doc["lift"]["base_map"], serde_json::json!([1, 0]));
    assert_eq!(doc["lift"]["components"].as_array().unwrap().len(), 9);
}

#[test]
fn lift_rejects_non_homomorphisms() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("edge.json");
    let edge = FiniteStructure::graph(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
    fs::write(&path, to_json(&edge)).unwrap();
    let out = forge(&["lift", "--root", path.to_str().unwrap(), "--map", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not an endomorphism"));
    let out = forge(&["lift", "--root", path.to_str().unwrap(), "--map", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dot_export_of_edgeless_pair() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--root", "edgeless:2", "--stages", "0"]);
    let out = forge(&["export", "--stage", dir.path().join("stage_0.json").to_str().unwrap(), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("--")).count(), 2);
    assert_eq!(dot.matches(" -- ").count(), 0);
}

#[test]
fn dot_export_of_chain_has_two_covers() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("chain.json");
    fs::write(&path, to_json(&chain_semilattice(3).unwrap())).unwrap();
    let out = forge(&["export", "--stage", path.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 2);
}

#[test]
fn dot_export_refuses_metric() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--root", "simplex:2:1", "--stages", "0"]);
    let out = forge(&["export", "--stage", dir.path().join("stage_0.json").to_str().unwrap(), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_export_round_trips() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), &["--root", "freesemilattice:2", "--stages", "0"]);
    let original = dir.path().join("stage_0.json");
    let copy = dir.path().join("copy.json");
    let out = forge(&["export", "--stage", original.to_str().unwrap(), "--out", copy.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&original).unwrap(), fs::read(&copy).unwrap());
    let again = forge(&["export", "--stage", copy.to_str().unwrap()]);
    assert_eq!(again.stdout, fs::read(&copy).unwrap());
}

#[test]
fn ceiling_from_environment_refuses_large_stages() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_forge"))
        .args(["build", "--root", "edgeless:2", "--stages", "2", "--out", dir.path().to_str().unwrap()])
        .env("FORGE_MAX_CARRIER", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stage 2"));
}
