//! Runs detect, calibrate, classify and evaluate on the bundled mini corpus
//! and lists the files written.
//!
//!     cargo run --example end_to_end [out_dir]

use std::path::PathBuf;

use figdesc::pipeline::{run_all, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("figdesc-demo"));
    let cfg = PipelineConfig {
        corpus: Some(fixtures.join("mini")),
        synsets: Some(fixtures.join("synsets.json")),
        embeddings: Some(fixtures.join("embeddings.txt")),
        gold: Some(fixtures.join("mini_gold.jsonl")),
        out: out.clone(),
        ..PipelineConfig::default()
    };
    if let Some(report) = run_all(&cfg)? {
        let m = report.metrics;
        println!(
            "λ={} threshold={:.4}: tp={} fp={} tn={} fn={} F1={:.4}",
            report.lambda, report.threshold, m.tp, m.fp, m.tn, m.fn_, m.f1
        );
        for row in report.sweep {
            println!("    λ={:<4} F1={:.4} accuracy={:.4}", row.lambda, row.f1, row.accuracy);
        }
    }
    let mut files: Vec<_> = std::fs::read_dir(&out)?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
