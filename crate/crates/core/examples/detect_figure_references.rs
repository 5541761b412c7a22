//! Finds figure-referring sentences in an article and the neighboring
//! sentences that become classification candidates.
//!
//!     cargo run --example detect_figure_references [article.json|article.xml]

use std::collections::BTreeMap;

use figdesc::corpus::{load_article_json, load_article_xml, Article};
use figdesc::figref::{FigRefDetector, DEFAULT_WINDOW};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let article = match std::env::args().nth(1) {
        Some(path) => {
            let bytes = std::fs::read(&path)?;
            if path.ends_with(".xml") {
                load_article_xml(&bytes)?
            } else {
                load_article_json(&bytes)?
            }
        }
        None => Article::from_paragraphs(
            "demo",
            "XANES of copper catalysts",
            "",
            BTreeMap::new(),
            [
                vec![
                    "The catalysts were reduced in hydrogen.",
                    "Figure 1 shows the normalized spectra.",
                    "A sharp pre-edge peak appears near 8983 eV.",
                    "Its intensity drops after reduction.",
                ],
                vec![
                    "The fits are compared in Figs. 2-3.",
                    "Both models reproduce the white line.",
                ],
            ],
        )?,
    };

    let detector = FigRefDetector::default();
    for r in detector.scan_article(&article, DEFAULT_WINDOW) {
        let text = &article.sentence(r.candidates.ref_global_index).unwrap().text;
        let labels: Vec<&str> = r.matches.iter().flat_map(|m| m.labels.iter().map(String::as_str)).collect();
        println!("[{}] {text}  (figure {})", r.candidates.ref_global_index, labels.join(", "));
        for gi in r.candidates.neighbor_indices {
            println!("    candidate [{gi}] {}", article.sentence(gi).unwrap().text);
        }
    }
    let population = detector.candidate_population(&article, DEFAULT_WINDOW);
    println!("{} candidate sentence(s) out of {}", population.len(), article.sentence_count());
    Ok(())
}
