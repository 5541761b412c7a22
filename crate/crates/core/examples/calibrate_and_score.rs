//! Calibrates element weights on the figure-referring sentences of a parsed
//! corpus and scores every candidate sentence.
//!
//!     cargo run --example calibrate_and_score [corpus_dir] [lambda]

use std::path::PathBuf;

use figdesc::corpus::Segmenter;
use figdesc::pipeline::{classify_corpus, load_corpus_dir, reference_tmrs, Resources};
use figdesc::scoring::{calibrate, compute_threshold, ScoringConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini"));
    let lambda: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.5);

    let corpus = load_corpus_dir(&dir, &Segmenter::default())?;
    let resources = Resources::bundled();
    let cfg = ScoringConfig::with_lambda(lambda);

    let refs = reference_tmrs(&corpus, &resources, cfg.window);
    let table = calibrate(&refs, &cfg)?;
    println!(
        "{} reference sentences, {} concepts, {} properties, mean weight {:.4}",
        refs.len(),
        table.concepts.len(),
        table.properties.len(),
        table.mean_ref_weight
    );
    let mut top: Vec<(&String, &f64)> = table.concepts.iter().collect();
    top.sort_by(|a, b| b.1.total_cmp(a.1));
    for (name, w) in top.iter().take(5) {
        println!("    {name:<28} {w:.4}");
    }

    let threshold = compute_threshold(table.mean_ref_weight, lambda)?;
    println!("threshold at λ={lambda}: {threshold:.4}");
    for r in classify_corpus(&corpus, &resources, &table, &cfg, threshold) {
        let mark = if r.is_descriptive { '+' } else { ' ' };
        println!("{mark} {:.4}  {}#{}  {}", r.weight, r.uid, r.global_index, r.text);
    }
    Ok(())
}
