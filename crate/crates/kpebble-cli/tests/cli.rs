use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kpebble(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kpebble")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_is_deterministic_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen-kai", "--k", "2", "--nodes", "4", "--rules", "3", "--seed", "11", "--out", "a.json"];
    assert!(kpebble(dir.path(), &args).status.success());
    let first = std::fs::read(dir.path().join("a.json")).unwrap();
    assert!(kpebble(dir.path(), &args).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("a.json")).unwrap());

    let m = read(&dir.path().join("a.json.manifest.json"));
    assert_eq!(m["command"], "gen-kai");
    assert_eq!(m["seed"], 11);
    assert_eq!(m["outputs"][0], "a.json");
    assert!(m["timing_ms"].is_u64());
}

#[test]
fn pipeline_from_instance_to_pebble_game() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // Player 1 moves pebble 1 from 1 to the goal 3 while pebble 2 sits on 2.
    std::fs::write(d.join("win.json"), r#"{"k":2,"nodes":3,"rules":[[1,2,3,1,2]],"start":[1,2],"goal":3}"#).unwrap();
    let kai = json(&kpebble(d, &["solve-kai", "win.json"]));
    assert_eq!(kai["winner"], "Player1");

    assert!(kpebble(d, &["reduce", "win.json", "--decolor", "--out", "red.json"]).status.success());
    let red = read(&d.join("red.json"));
    assert_eq!(red["pebbles"], 3);
    assert!(red["plain"].is_object());

    let game = json(&kpebble(d, &["solve-pebble", "red.json", "--k", "3"]));
    assert_eq!(game["winner"], "spoiler");
}

#[test]
fn consistency_on_raw_structures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let k3 = r#"{"universe":3,"relations":{"E":{"arity":2,"tuples":[[0,1],[1,0],[0,2],[2,0],[1,2],[2,1]]}}}"#;
    let k2 = r#"{"universe":2,"relations":{"E":{"arity":2,"tuples":[[0,1],[1,0]]}}}"#;
    std::fs::write(d.join("pair.json"), format!(r#"{{"a":{k3},"b":{k2}}}"#)).unwrap();
    assert_eq!(json(&kpebble(d, &["consistency", "pair.json", "--k", "3"]))["establishable"], false);
    assert_eq!(json(&kpebble(d, &["consistency", "pair.json", "--k", "2"]))["establishable"], true);
    assert_eq!(json(&kpebble(d, &["solve-pebble", "pair.json", "--k", "3"]))["winner"], "spoiler");
}

#[test]
fn crossvalidate_smoke_sweep_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = kpebble(d, &["crossvalidate", "--k", "2", "--nodes", "3", "--rule-triples", "1", "--out", "cv.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cv = read(&d.join("cv.json"));
    assert_eq!(cv["summary"]["disagreements"], 0);
    assert_eq!(cv["summary"]["skipped"], 0);
    assert_eq!(cv["summary"]["agreements"], cv["summary"]["cases"]);

    let replay = kpebble(d, &["--replay", "cv.json.manifest.json"]);
    assert!(replay.status.success(), "{}", String::from_utf8_lossy(&replay.stderr));

    // A tampered output is caught.
    std::fs::write(d.join("cv.json"), "{}\n").unwrap();
    assert_eq!(kpebble(d, &["--replay", "cv.json.manifest.json"]).status.code(), Some(4));
}

#[test]
fn dot_export_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["export-dot", "--gadget", "switch", "--k", "2", "--nodes", "2", "--side", "duplicator"];
    let a = kpebble(dir.path(), &args);
    let b = kpebble(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("graph") || text.starts_with("digraph"));
    assert_eq!(text.matches("subgraph \"cluster_").count(), 8);
}

#[test]
fn lemma_subset_passes() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&kpebble(dir.path(), &["verify-lemmas", "--k", "2", "--nodes", "2", "--lemma", "choice", "--m", "1"]));
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(kpebble(d, &["solve-kai", "nope.json"]).status.code(), Some(2));
    assert_eq!(kpebble(d, &["export-dot", "--gadget", "switch", "--side", "left", "--k", "2", "--nodes", "2"]).status.code(), Some(2));
    assert_eq!(kpebble(d, &["gen-kai", "--k", "2"]).status.code(), Some(2));
    assert_eq!(kpebble(d, &[]).status.code(), Some(2));

    // Pebble 2 would have to cover the start of pebble 1: a rejected instance.
    std::fs::write(d.join("bad.json"), r#"{"k":2,"nodes":3,"rules":[],"start":[1,1],"goal":3}"#).unwrap();
    assert_eq!(kpebble(d, &["solve-kai", "bad.json"]).status.code(), Some(2));

    let over = kpebble(d, &["crossvalidate", "--k", "2", "--nodes", "3", "--random", "1", "--budget-configs", "10"]);
    // Over-budget cases are skipped with a reason, not dropped.
    let v = json(&over);
    assert_eq!(v["summary"]["skipped"], 1);
    assert!(v["cases"][0]["skipped"].as_str().unwrap().contains("budget"));

    std::fs::write(d.join("win.json"), r#"{"k":2,"nodes":3,"rules":[[1,2,3,1,2]],"start":[1,2],"goal":3}"#).unwrap();
    assert!(kpebble(d, &["reduce", "win.json", "--out", "red.json"]).status.success());
    assert_eq!(kpebble(d, &["solve-pebble", "red.json", "--k", "3", "--budget-configs", "10"]).status.code(), Some(3));
}
