//! Cross-validates the bag-of-words logistic regression baseline.
//!
//!     cargo run --example baseline_cv [labeled.jsonl] [folds]

use figdesc::baseline::{kfold_cv, load_labeled_jsonl, LogRegHyperparams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/labeled.jsonl").to_string());
    let k: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10);

    let items = load_labeled_jsonl(&std::fs::read_to_string(path)?)?;
    let hp = LogRegHyperparams::default();
    let report = kfold_cv(&items, k, hp.seed, &hp)?;
    println!("fold  train  test  vocab  accuracy  f1");
    for f in &report.folds {
        println!(
            "{:>4}  {:>5}  {:>4}  {:>5}  {:>8.4}  {:.4}",
            f.fold, f.train_size, f.test_size, f.vocab_size, f.metrics.accuracy, f.metrics.f1
        );
    }
    println!("mean accuracy {:.4}, mean F1 {:.4}", report.mean_accuracy, report.mean_f1);
    Ok(())
}
