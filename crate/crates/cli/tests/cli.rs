//! Binary-level tests of the command surface and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn sgmine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgmine"))
        .args(args)
        .output()
        .expect("spawn sgmine")
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

const SYNTH_SPEC: &str = r#"{
  "background": {"tweets": 300, "attachment": 2, "users": 60, "hashtag_pool": 10, "vocabulary": 500},
  "planted": [{"archetype": "dense-core-low-diversity", "size": 15, "vocabulary": 4}],
  "seed": 7
}"#;

fn pipeline_config(input: &Path, out: &Path) -> String {
    format!(
        r#"{{
  "input": "{}",
  "keywords": ["tag", "core"],
  "group_pattern": "(:tweet{{date}})-[:uses]->(:hashtag{{text}})",
  "seed": 7,
  "out_dir": "{}"
}}"#,
        input.display(),
        out.display()
    )
}

#[test]
fn synth_run_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let data = dir.path().join("data.jsonl");
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    write(&spec, SYNTH_SPEC);

    let synth = sgmine(&["synth", "--config", spec.to_str().unwrap(), "--out", data.to_str().unwrap()]);
    assert!(synth.status.success(), "{}", String::from_utf8_lossy(&synth.stderr));
    assert!(data.exists());

    write(&cfg, &pipeline_config(&data, &out));
    let run = sgmine(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let report = out.join("report.json");
    assert!(report.exists());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(parsed["verdict"]["v1"].is_object());
}

#[test]
fn run_same_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let data = dir.path().join("data.jsonl");
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    write(&spec, SYNTH_SPEC);
    assert!(sgmine(&["synth", "--config", spec.to_str().unwrap(), "--out", data.to_str().unwrap()])
        .status
        .success());
    write(&cfg, &pipeline_config(&data, &out));

    assert!(sgmine(&["run", "--config", cfg.to_str().unwrap()]).status.success());
    let first = std::fs::read(out.join("report.json")).unwrap();
    assert!(sgmine(&["run", "--config", cfg.to_str().unwrap()]).status.success());
    let second = std::fs::read(out.join("report.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn missing_config_exits_2() {
    let out = sgmine(&["run", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unmatched_keywords_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let data = dir.path().join("data.jsonl");
    let cfg_path = dir.path().join("cfg.json");
    write(&spec, SYNTH_SPEC);
    assert!(sgmine(&["synth", "--config", spec.to_str().unwrap(), "--out", data.to_str().unwrap()])
        .status
        .success());
    let cfg = pipeline_config(&data, &dir.path().join("out"))
        .replace(r#"["tag", "core"]"#, r#"["zzz-absent"]"#);
    write(&cfg_path, &cfg);
    let out = sgmine(&["run", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty background graph"));
}

#[test]
fn malformed_dataset_exits_3_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.jsonl");
    write(
        &data,
        "{\"id\":\"1\",\"author\":\"a\",\"text\":\"t\",\"created_at\":\"2026-02-01\"}\nnot json\n",
    );
    let out = sgmine(&["ingest", "--input", data.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn ingest_writes_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.jsonl");
    let snap = dir.path().join("graph.json");
    write(
        &data,
        "{\"id\":\"1\",\"author\":\"a\",\"text\":\"t\",\"created_at\":\"2026-02-01\",\"hashtags\":[\"x\"]}\n",
    );
    let out = sgmine(&["ingest", "--input", data.to_str().unwrap(), "--out", snap.to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&snap).unwrap()).unwrap();
    assert_eq!(parsed["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_prints_jsd_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let out = dir.path().join("hist");
    write(&a, "1.0\n2.0\n3.0\n");
    write(&b, "1.0\n2.0\n3.0\n4.0\n");
    let result = sgmine(&[
        "compare",
        "--candidate",
        a.to_str().unwrap(),
        "--reference",
        b.to_str().unwrap(),
        "--bins",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    assert!(String::from_utf8_lossy(&result.stdout).starts_with("jsd "));
    let csv = std::fs::read_to_string(out.join("reference.csv")).unwrap();
    assert!(csv.starts_with("edge_low,edge_high,count,normalized\n"));
    assert_eq!(csv.lines().count(), 5); // header + 4 bins
}

#[test]
fn empty_reference_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    write(&a, "1.0\n2.0\n");
    write(&b, "");
    let out = sgmine(&[
        "compare",
        "--candidate",
        a.to_str().unwrap(),
        "--reference",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn pattern_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let data = dir.path().join("data.jsonl");
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    write(&spec, SYNTH_SPEC);
    assert!(sgmine(&["synth", "--config", spec.to_str().unwrap(), "--out", data.to_str().unwrap()])
        .status
        .success());
    write(&cfg, &pipeline_config(&data, &out));
    let run = sgmine(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--pattern",
        "(:tweet{popularity})",
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["group_pattern"], "(:tweet{popularity})");
    // grouped by popularity value instead of hashtag
    let key = report["candidates"][0]["group_key"].as_object().unwrap();
    assert!(key.contains_key("tweet.popularity"));
}

#[test]
fn metrics_reports_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.jsonl");
    write(
        &data,
        "{\"id\":\"1\",\"author\":\"a\",\"text\":\"alpha beta\",\"created_at\":\"2026-02-01\",\"mentions\":[\"b\",\"c\"]}\n",
    );
    let out = sgmine(&["metrics", "--input", data.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(parsed["ev"].is_object());
    assert!(parsed["diversity"].as_f64().unwrap() > 0.0);
}
