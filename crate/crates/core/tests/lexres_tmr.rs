mod common;

use std::fs;

use figdesc::lexres::{candidate_verb_lemmas, load_embeddings, load_synsets, LexicalResources};
use figdesc::ontology::{OntologyGraph, Pos};
use figdesc::tmr::{tmr_elements, ElementKind, ElementSource, Gazetteer, TmrContext};
use proptest::prelude::*;

fn resources() -> LexicalResources {
    let synsets = load_synsets(&fs::read(common::fixture("synsets.json")).unwrap()).unwrap();
    let embeddings = load_embeddings(&fs::read(common::fixture("embeddings.txt")).unwrap()).unwrap();
    LexicalResources::new(synsets, Some(embeddings))
}

// expected lists come from a brute-force cosine ranking over the fixture
// vectors, done outside this crate
#[test]
fn fixture_expansions() {
    let r = resources();
    let cases: [(&str, &[&str]); 14] = [
        ("appear", &["show"]),
        ("change", &["shift", "alter"]),
        ("decrease", &["drop", "fall", "reduce"]),
        ("drop", &["decrease", "fall", "release"]),
        ("follow", &[]),
        ("increase", &["rise", "grow"]),
        ("indicate", &["show", "suggest"]),
        ("mark", &["show", "indicate"]),
        ("present", &["show", "display", "give"]),
        ("represent", &["depict", "show"]),
        ("rise", &["increase", "climb"]),
        ("show", &["demonstrate", "exhibit", "display"]),
        ("summarize", &[]),
        ("portray", &["depict", "show"]),
    ];
    for (verb, want) in cases {
        assert_eq!(r.candidate_verb_lemmas(verb), want, "{verb}");
    }
    assert!(r.embeddings.as_ref().unwrap().vector("portray").is_none());
}

#[test]
fn missing_store_falls_back_to_synset_order() {
    let r = resources();
    assert_eq!(
        candidate_verb_lemmas(&r.synsets, None, "present", 20),
        ["show", "display", "give", "submit", "offer", "gift"]
    );
    assert!(candidate_verb_lemmas(&r.synsets, None, "zorb", 20).is_empty());
}

#[test]
fn oov_verb_reaches_a_sense_through_expansion() {
    let graph = OntologyGraph::bundled();
    assert!(graph.lookup_senses("present", Pos::Verb).is_empty());
    let r = resources();
    let gaz = Gazetteer::default();
    let parsed = common::parse(&[
        ("Figure", "figure", "NOUN", 3, "nsubj"),
        ("2", "2", "NUM", 1, "nummod"),
        ("presents", "present", "VERB", 0, "root"),
        ("a", "a", "DET", 6, "det"),
        ("broad", "broad", "ADJ", 6, "amod"),
        ("peak", "peak", "NOUN", 3, "obj"),
    ]);
    let with = TmrContext::new(&graph, Some(&r), &gaz).build_sentence_tmr(&parsed, 0);
    let without = TmrContext::new(&graph, None, &gaz).build_sentence_tmr(&parsed, 0);
    let has_show = |t: &figdesc::tmr::Tmr| tmr_elements(t).iter().any(|e| e.1 == "SHOW-INFORMATION");
    assert!(has_show(&with));
    assert!(!has_show(&without));
    assert!(without.unmapped_tokens.contains(&3));
}

const NOUNS: [&str; 12] = [
    "figure", "spectrum", "peak", "band", "curve", "edge", "sample", "intensity", "position", "line", "zorb", "we",
];
const VERBS: [&str; 10] = ["show", "exhibit", "increase", "shift", "prepare", "use", "display", "present", "glimmer", "measure"];
const ADJS: [&str; 8] = ["sharp", "broad", "linear", "red", "rapid", "vertical", "shiny", "upper"];

/// `[adj] subject verb [adj] [object]`; the adjective goes on the object
/// when `adj.1` is set and there is an object.
fn sentence(s: usize, v: usize, o: Option<usize>, adj: Option<(usize, bool)>, passive: bool) -> figdesc::corpus::ParsedSentence {
    let on_object = adj.is_some_and(|a| a.1) && o.is_some();
    let subject_id = if adj.is_some() && !on_object { 2 } else { 1 };
    let verb_id = subject_id + 1;
    let object_id = verb_id + 1 + usize::from(on_object);
    let subj_rel = if passive { "nsubj:pass" } else { "nsubj" };
    let subj_upos = if NOUNS[s] == "we" { "PRON" } else { "NOUN" };
    let mut rows = Vec::new();
    if let (Some((a, _)), false) = (adj, on_object) {
        rows.push((ADJS[a], ADJS[a], "ADJ", subject_id, "amod"));
    }
    rows.push((NOUNS[s], NOUNS[s], subj_upos, verb_id, subj_rel));
    rows.push((VERBS[v], VERBS[v], "VERB", 0, "root"));
    if let Some(o) = o {
        if let (Some((a, _)), true) = (adj, on_object) {
            rows.push((ADJS[a], ADJS[a], "ADJ", object_id, "amod"));
        }
        rows.push((NOUNS[o], NOUNS[o], "NOUN", verb_id, "obj"));
    }
    common::parse(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn tmr_invariants(
        s in 0..NOUNS.len(),
        v in 0..VERBS.len(),
        o in proptest::option::of(0..NOUNS.len()),
        adj in proptest::option::of((0..ADJS.len(), any::<bool>())),
        passive in any::<bool>(),
    ) {
        let graph = OntologyGraph::bundled();
        let gaz = Gazetteer::default();
        let parsed = sentence(s, v, o, adj, passive);
        let ctx = TmrContext::new(&graph, None, &gaz);
        let tmr = ctx.build_sentence_tmr(&parsed, 7);

        // deterministic
        prop_assert_eq!(tmr.canonical_string(), ctx.build_sentence_tmr(&parsed, 7).canonical_string());

        for (kind, name, d) in tmr_elements(&tmr) {
            prop_assert!(name != "UNKNOWN" && !name.starts_with("UNKNOWN#"));
            prop_assert!(!OntologyGraph::is_root(name));
            prop_assert!(d >= 1);
            if kind == ElementKind::Property {
                prop_assert_eq!(d, 1);
            }
        }

        // each concept chain climbs first parents one step per distance unit
        for e in &tmr.elements {
            if let (ElementKind::Concept, ElementSource::Lexeme { token, .. }) = (e.kind, &e.source) {
                if e.distance > 1 {
                    let below = tmr.elements.iter().find(|x| {
                        x.kind == ElementKind::Concept
                            && x.distance == e.distance - 1
                            && matches!(&x.source, ElementSource::Lexeme { token: t, .. } if t == token)
                            && graph.ancestors(&x.name).unwrap().first() == Some(&e.name)
                    });
                    prop_assert!(below.is_some(), "{} at {} has no child link", e.name, e.distance);
                }
            }
        }

        for e in tmr.elements.iter().filter(|e| e.is_unknown()) {
            prop_assert!(!tmr_elements(&tmr).iter().any(|x| x.1 == e.name));
        }
    }
}
