//! Shows how a verb missing from the lexicon is expanded through synonyms
//! filtered by embedding neighbors.
//!
//!     cargo run --example verb_expansion -- <synsets.json> <embeddings.txt> [verb...]

use figdesc::lexres::{load_embeddings, load_synsets, LexicalResources};
use figdesc::ontology::{OntologyGraph, Pos};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let synsets = args.next().unwrap_or_else(|| format!("{fixtures}/synsets.json"));
    let embeddings = args.next().unwrap_or_else(|| format!("{fixtures}/embeddings.txt"));
    let mut verbs: Vec<String> = args.collect();
    if verbs.is_empty() {
        verbs = ["present", "indicate", "rise", "portray"].map(String::from).to_vec();
    }

    let resources = LexicalResources::new(
        load_synsets(&std::fs::read(synsets)?)?,
        Some(load_embeddings(&std::fs::read(embeddings)?)?),
    );
    let graph = OntologyGraph::bundled();
    for verb in verbs {
        let direct = graph.lookup_senses(&verb, Pos::Verb);
        if !direct.is_empty() {
            println!("{verb}: in the lexicon ({})", direct[0].sense);
            continue;
        }
        let lemmas = resources.candidate_verb_lemmas(&verb);
        println!("{verb}: expands to {lemmas:?}");
        for lemma in lemmas {
            for entry in graph.lookup_senses(&lemma, Pos::Verb) {
                println!("    {lemma} -> {} (priority {})", entry.sense, entry.priority);
            }
        }
    }
    Ok(())
}
