mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use figdesc::pipeline::{self, PipelineConfig};
use serde_json::Value;

fn mini_config(out: &Path) -> PipelineConfig {
    PipelineConfig {
        corpus: Some(common::fixture("mini")),
        synsets: Some(common::fixture("synsets.json")),
        embeddings: Some(common::fixture("embeddings.txt")),
        gold: Some(common::fixture("mini_gold.jsonl")),
        out: out.to_path_buf(),
        ..PipelineConfig::default()
    }
}

fn records(path: &Path) -> Vec<Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|v| v.get("provenance").is_none())
        .collect()
}

fn figdesc(args: &[&str]) -> Output {
    Command::new(common::bin())
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

#[test]
fn classify_matches_golden_records() {
    let dir = tempfile::tempdir().unwrap();
    pipeline::run_all(&mini_config(dir.path())).unwrap();
    let got = records(&dir.path().join(pipeline::SCORES_FILE));
    let want = records(&common::fixture("golden/mini_scores.jsonl"));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        for key in ["uid", "global_index", "text", "is_descriptive", "tmr"] {
            assert_eq!(g[key], w[key], "{key} of {}#{}", w["uid"], w["global_index"]);
        }
        let (a, b) = (g["weight"].as_f64().unwrap(), w["weight"].as_f64().unwrap());
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn every_candidate_is_classified_once() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = mini_config(dir.path());
    let detect = pipeline::cmd_detect(&cfg).unwrap();
    pipeline::cmd_calibrate(&cfg).unwrap();
    let classify = pipeline::cmd_classify(&cfg).unwrap();
    assert_eq!(detect.candidates, 40);
    assert_eq!(classify.candidates, detect.candidates);
    let ids: std::collections::BTreeSet<(String, u64)> = records(&dir.path().join(pipeline::SCORES_FILE))
        .iter()
        .map(|r| (r["uid"].as_str().unwrap().to_string(), r["global_index"].as_u64().unwrap()))
        .collect();
    assert_eq!(ids.len(), 40);

    let strict = PipelineConfig {
        lambda: 1e9,
        ..cfg.clone()
    };
    assert_eq!(pipeline::cmd_classify(&strict).unwrap().positives, 0);
}

#[test]
fn reference_weights_and_mean_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = mini_config(dir.path());
    pipeline::cmd_calibrate(&cfg).unwrap();
    let table = pipeline::load_weights(&dir.path().join(pipeline::WEIGHTS_FILE)).unwrap();
    assert!(table.validate(&cfg.scoring()).is_ok());
    let tsv = fs::read_to_string(dir.path().join(pipeline::DETECTION_SWEEP_FILE)).unwrap();
    let lines: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "lambda\tthreshold\tdetection_rate");
    assert_eq!(lines.len(), 7);
}

#[test]
fn bin_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let f = |p: &str| common::fixture(p).to_string_lossy().into_owned();
    let o = figdesc(&[
        "run",
        "--corpus",
        &f("mini"),
        "--synsets",
        &f("synsets.json"),
        "--embeddings",
        &f("embeddings.txt"),
        "--gold",
        &f("mini_gold.jsonl"),
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["labeled"], 40);
    for name in ["detect.jsonl", "weights.json", "calibration.json", "scores.jsonl", "sweep.tsv", "metrics.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }

    let o = figdesc(&["baseline", "--labeled", &f("labeled.jsonl"), "--folds", "5", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tsv = fs::read_to_string(dir.path().join("comparison.tsv")).unwrap();
    assert!(tsv.contains("model\tf1\taccuracy"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("figdesc.toml");
    fs::write(
        &cfg_path,
        format!("corpus = {:?}\nlambda = 100.0\n", common::fixture("mini").to_string_lossy()),
    )
    .unwrap();
    let out = dir.path().join("o");
    let run = |extra: &[&str]| {
        let mut args = vec!["run", "--config", cfg_path.to_str().unwrap(), "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = figdesc(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let header: Value = serde_json::from_str(fs::read_to_string(out.join("scores.jsonl")).unwrap().lines().next().unwrap()).unwrap();
        header["provenance"]["config"]["lambda"].as_f64().unwrap()
    };
    assert_eq!(run(&[]), 100.0);
    assert_eq!(run(&["--lambda", "0.3"]), 0.3);
}

#[test]
fn exit_codes() {
    assert_eq!(figdesc(&["--help"]).status.code(), Some(0));
    assert_eq!(figdesc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(figdesc(&["detect"]).status.code(), Some(1), "missing --corpus");
    assert_eq!(figdesc(&["detect", "--corpus", "x", "--lambda", "-1"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "no_such_option = 1\n").unwrap();
    assert_eq!(figdesc(&["detect", "--config", bad.to_str().unwrap()]).status.code(), Some(1));

    let out = dir.path().join("o");
    // a path that does not exist is a usage error, unreadable content is a data error
    let missing = dir.path().join("nope");
    assert_eq!(
        figdesc(&["detect", "--corpus", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(),
        Some(1)
    );

    let corpus = dir.path().join("c");
    fs::create_dir(&corpus).unwrap();
    fs::write(corpus.join("broken.json"), "{").unwrap();
    assert_eq!(
        figdesc(&["detect", "--corpus", corpus.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn empty_corpus_directory() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty");
    fs::create_dir(&corpus).unwrap();
    let out = dir.path().join("o");
    let o = figdesc(&["detect", "--corpus", corpus.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["articles"], 0);
    assert_eq!(summary["candidates"], 0);
    assert!(records(&out.join("detect.jsonl")).is_empty());
}
