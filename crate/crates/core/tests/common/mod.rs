#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use figdesc::corpus::{parse_conllu, ParsedSentence};
use figdesc::ontology::{OntologyGraph, PropertyKind, RootCategory, Sense};
use figdesc::tmr::{Candidate, FrameToken, Modifier, ModifierTarget, SlotCandidates, SvoFrame};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_figdesc"))
}

/// One sentence from `(form, lemma, upos, head, deprel)` rows.
pub fn parse(rows: &[(&str, &str, &str, usize, &str)]) -> ParsedSentence {
    let text: String = rows
        .iter()
        .enumerate()
        .map(|(i, (form, lemma, upos, head, rel))| format!("{}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_\n", i + 1))
        .collect();
    parse_conllu(&text).unwrap().remove(0)
}

/// "Figure 1 shows the band position."
pub fn band_position() -> ParsedSentence {
    parse(&[
        ("Figure", "figure", "NOUN", 3, "nsubj"),
        ("1", "1", "NUM", 1, "nummod"),
        ("shows", "show", "VERB", 0, "root"),
        ("the", "the", "DET", 6, "det"),
        ("band", "band", "NOUN", 6, "compound"),
        ("position", "position", "NOUN", 3, "obj"),
        (".", ".", "PUNCT", 3, "punct"),
    ])
}

/// Reference per-element weights of the band-position example, keyed by
/// `(is_property, name)`.
pub fn reference_weights() -> BTreeMap<(bool, &'static str), f64> {
    BTreeMap::from([
        ((false, "DRAWING"), 0.0298),
        ((false, "GRAPHICAL-REPRESENTATION"), 0.2332),
        ((false, "INFORMATION-OBJECT"), 0.1086),
        ((false, "SOCIAL-OBJECT"), 0.022),
        ((false, "SHOW-INFORMATION"), 0.2052),
        ((true, "DIRECTIONALITY"), 0.0055),
        ((true, "GEOMETRIC-ASPECT"), 0.1154),
    ])
}

/// Non-root concepts and attribute senses of the bundled ontology, grouped
/// for random frame generation.
pub struct SensePool {
    pub events: Vec<Sense>,
    pub objects: Vec<Sense>,
    pub attributes: Vec<Sense>,
}

impl SensePool {
    pub fn new(graph: &OntologyGraph) -> Self {
        let mut events = Vec::new();
        let mut objects = Vec::new();
        for c in graph.concepts() {
            if OntologyGraph::is_root(&c.name) {
                continue;
            }
            match c.root_category {
                RootCategory::Event => events.push(Sense::concept(&c.name)),
                RootCategory::Object => objects.push(Sense::concept(&c.name)),
            }
        }
        let attributes = graph
            .properties()
            .filter(|p| p.kind == PropertyKind::Attribute)
            .map(|p| Sense::property(&p.name, p.values.first().map(String::as_str)))
            .collect();
        SensePool {
            events,
            objects,
            attributes,
        }
    }

    fn candidates<R: Rng>(&self, rng: &mut R, pools: &[&[Sense]], max: usize) -> Vec<Candidate> {
        let n = rng.gen_range(1..=max);
        (0..n)
            .map(|_| {
                let pool = pools[rng.gen_range(0..pools.len())];
                Candidate {
                    sense: pool.choose(rng).unwrap().clone(),
                    priority: rng.gen_range(0..4),
                }
            })
            .collect()
    }

    /// A random frame with candidate lists in slot order.
    pub fn random_frame<R: Rng>(&self, rng: &mut R) -> (SvoFrame, SlotCandidates) {
        let tok = |id: usize, upos: &str| FrameToken::new(id, &format!("w{id}"), &format!("w{id}"), upos);
        let subject = rng.gen_bool(0.8).then(|| tok(1, "NOUN"));
        let object = rng.gen_bool(0.7).then(|| tok(3, "NOUN"));
        let mut targets = vec![ModifierTarget::Verb];
        if subject.is_some() {
            targets.push(ModifierTarget::Subject);
        }
        if object.is_some() {
            targets.push(ModifierTarget::Object);
        }
        let modifiers: Vec<Modifier> = (0..rng.gen_range(0..=3))
            .map(|i| Modifier {
                token: tok(4 + i, "ADJ"),
                target: *targets.choose(rng).unwrap(),
            })
            .collect();
        let frame = SvoFrame {
            verb: tok(2, "VERB"),
            subject,
            object,
            modifiers,
            passive: rng.gen_bool(0.3),
        };
        let nouns: [&[Sense]; 2] = [&self.objects, &self.attributes];
        let mut cands: SlotCandidates = vec![self.candidates(rng, &[&self.events, &self.objects], 3)];
        for present in [frame.subject.is_some(), frame.object.is_some()] {
            cands.push(if present { self.candidates(rng, &nouns, 3) } else { Vec::new() });
        }
        for _ in &frame.modifiers {
            // an empty list models a modifier without lexicon senses
            cands.push(if rng.gen_bool(0.1) { Vec::new() } else { self.candidates(rng, &[&self.attributes, &self.objects], 3) });
        }
        (frame, cands)
    }
}
