mod common;

use std::collections::BTreeMap;
use std::fs;

use figdesc::corpus::{load_article_json, load_article_xml, Segmenter};
use figdesc::figref::{window_neighbors, FigRefDetector, DEFAULT_WINDOW};
use figdesc::pipeline::load_corpus_dir;
use proptest::prelude::*;
use serde::Deserialize;

#[derive(Deserialize)]
struct ManifestEntry {
    uid: String,
    paragraphs: usize,
    sentences: usize,
    reference_sentences: usize,
    candidates: usize,
}

#[derive(Deserialize)]
struct Manifest {
    articles: usize,
    sentences: usize,
    files: BTreeMap<String, ManifestEntry>,
}

#[test]
fn bulk_corpus_matches_manifest() {
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(common::fixture("bulk_manifest.json")).unwrap()).unwrap();
    let corpus = load_corpus_dir(&common::fixture("bulk"), &Segmenter::default()).unwrap();
    assert!(corpus.errors.is_empty());
    assert_eq!(corpus.articles.len(), manifest.articles);
    assert_eq!(manifest.articles, 137);
    assert_eq!(manifest.sentences, 22_352);

    let detector = FigRefDetector::default();
    let mut total = 0;
    for loaded in &corpus.articles {
        let want = &manifest.files[&loaded.file];
        let a = &loaded.article;
        assert_eq!(a.uid, want.uid);
        assert_eq!(a.paragraphs.len(), want.paragraphs, "{}", loaded.file);
        assert_eq!(a.sentence_count(), want.sentences, "{}", loaded.file);
        let refs = a.sentences().filter(|s| detector.is_reference(&s.text)).count();
        assert_eq!(refs, want.reference_sentences, "{}", loaded.file);
        assert_eq!(detector.candidate_population(a, DEFAULT_WINDOW).len(), want.candidates, "{}", loaded.file);
        total += a.sentence_count();
    }
    assert_eq!(total, 22_352);
}

#[test]
fn mini_corpus_is_fully_parsed() {
    let corpus = load_corpus_dir(&common::fixture("mini"), &Segmenter::default()).unwrap();
    assert!(corpus.errors.is_empty());
    assert_eq!(corpus.articles.len(), 20);
    for loaded in &corpus.articles {
        for s in loaded.article.sentences() {
            let parse = s.parse.as_ref().unwrap_or_else(|| panic!("{} #{} has no parse", loaded.file, s.global_index));
            let squeeze = |t: &str| t.split_whitespace().collect::<String>();
            assert_eq!(squeeze(&parse.text()), squeeze(&s.text));
        }
    }
    let xml = corpus.articles.iter().filter(|a| a.file.ends_with(".xml")).count();
    assert_eq!(xml, 5);
}

#[test]
fn json_and_xml_forms_agree() {
    let json = br#"{"uid": "a1", "title": "T", "abstract": "", "body_raw": ["First sentence here. See Fig. 2 for more.", "A new paragraph."]}"#;
    let xml = br#"<article uid="a1"><title>T</title><body><para>First sentence here. See Fig. 2 for more.</para><para>A new paragraph.</para></body></article>"#;
    let a = load_article_json(json).unwrap();
    let b = load_article_xml(xml).unwrap();
    let texts = |x: &figdesc::corpus::Article| x.sentences().map(|s| s.text.clone()).collect::<Vec<_>>();
    assert_eq!(texts(&a), ["First sentence here.", "See Fig. 2 for more.", "A new paragraph."]);
    assert_eq!(texts(&a), texts(&b));
    assert_eq!(a.paragraphs.len(), 2);
}

#[test]
fn broken_files_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("good.json"), br#"{"uid": "g", "title": "", "abstract": "", "body": [["One."]]}"#).unwrap();
    fs::write(dir.path().join("bad.json"), b"{ not json").unwrap();
    fs::write(dir.path().join("bad.xml"), b"<article><body>").unwrap();
    fs::write(dir.path().join("notes.txt"), b"ignored").unwrap();
    let corpus = load_corpus_dir(dir.path(), &Segmenter::default()).unwrap();
    assert_eq!(corpus.articles.len(), 1);
    let failed: Vec<&str> = corpus.errors.iter().map(|e| e.file.as_str()).collect();
    assert_eq!(failed, ["bad.json", "bad.xml"]);
}

#[test]
fn labels_and_spans() {
    let d = FigRefDetector::default();
    let m = d.detect(4, "Unlike Figs. 3–5, Figure S2 is noisy.");
    assert_eq!(m.len(), 2);
    assert_eq!(m[0].labels, ["3–5"]);
    assert_eq!(m[0].span, (7, 16));
    assert_eq!(m[1].labels, ["S2"]);
    assert!(m.iter().all(|x| x.global_index == 4));
}

proptest! {
    #[test]
    fn neighbors_are_in_window_and_not_references(
        flags in proptest::collection::vec(any::<bool>(), 1..20),
        pick in any::<prop::sample::Index>(),
        window in 0usize..5,
    ) {
        let i = pick.index(flags.len());
        let got = window_neighbors(&flags, i, window);
        prop_assert!(got.windows(2).all(|w| w[0] < w[1]));
        for &j in &got {
            prop_assert!(j != i && i.abs_diff(j) <= window && !flags[j]);
        }
        let missing = (0..flags.len()).filter(|&j| j != i && i.abs_diff(j) <= window && !flags[j] && !got.contains(&j)).count();
        prop_assert_eq!(missing, 0);
    }

    #[test]
    fn widening_the_window_only_adds(flags in proptest::collection::vec(any::<bool>(), 1..20), i in 0usize..20, w in 0usize..5) {
        let i = i % flags.len();
        let small = window_neighbors(&flags, i, w);
        let large = window_neighbors(&flags, i, w + 1);
        prop_assert!(small.iter().all(|j| large.contains(j)));
    }

    #[test]
    fn sentences_without_fig_never_match(s in "[a-eg-zA-EG-Z0-9 .,()-]{0,60}") {
        prop_assert!(!FigRefDetector::default().is_reference(&s));
    }
}
