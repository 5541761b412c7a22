//! Sweeps λ over a scores file from `figdesc classify` against gold labels.
//!
//!     cargo run --example lambda_sweep -- <scores.jsonl> <gold.jsonl> [λ,λ,...]

use figdesc::pipeline::{align_gold, read_gold, read_scores};
use figdesc::scoring::{lambda_sweep, sweep_tsv, DEFAULT_LAMBDAS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [scores, gold, rest @ ..] = args.as_slice() else {
        eprintln!("usage: lambda_sweep <scores.jsonl> <gold.jsonl> [λ,λ,...]");
        std::process::exit(1);
    };
    let lambdas: Vec<f64> = match rest.first() {
        Some(list) => list.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => DEFAULT_LAMBDAS.to_vec(),
    };
    let scores = read_scores(&std::fs::read_to_string(scores)?)?;
    let gold = read_gold(&std::fs::read_to_string(gold)?)?;
    let (weights, labels) = align_gold(&scores, &gold)?;
    let rows = lambda_sweep(&weights, scores.mean_ref_weight, &lambdas, &labels)?;
    print!("{}", sweep_tsv(&rows));
    if let Some(best) = rows.iter().max_by(|a, b| a.f1.total_cmp(&b.f1)) {
        println!("best F1 {:.4} at λ={}", best.f1, best.lambda);
    }
    Ok(())
}
