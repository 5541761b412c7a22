//! Figure-reference detection and neighbor-window candidate selection.

use std::collections::BTreeSet;

use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Article, Paragraph};

/// Default figure-reference pattern. Group `label` holds the figure label.
pub const DEFAULT_PATTERN: &str =
    r"\b(?:figures|figure|figs|fig)\.?\s*(?P<label>S?\d+(?:\s*[-–,]\s*S?\d+)*)";

pub const DEFAULT_WINDOW: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FigRefError {
    #[error("invalid figure-reference pattern: {0}")]
    Pattern(String),
    #[error("sentence {index} of paragraph {paragraph} is not figure-referring")]
    NotReference { paragraph: usize, index: usize },
    #[error("sentence {index} is out of range for paragraph {paragraph}")]
    OutOfRange { paragraph: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigRefMatch {
    pub global_index: usize,
    pub labels: Vec<String>,
    /// Character (not byte) offsets `[start, end)` within the sentence text.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub ref_global_index: usize,
    pub neighbor_indices: Vec<usize>,
}

/// A figure-referring sentence of an article with its matches and neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSentence {
    pub matches: Vec<FigRefMatch>,
    pub candidates: CandidateSet,
}

#[derive(Debug, Clone)]
pub struct FigRefDetector {
    regex: Regex,
}

impl Default for FigRefDetector {
    fn default() -> Self {
        FigRefDetector::new(None, true).expect("default pattern compiles")
    }
}

impl FigRefDetector {
    /// `pattern` overrides [`DEFAULT_PATTERN`]; it must define a `label`
    /// group or at least one capture group.
    pub fn new(pattern: Option<&str>, case_insensitive: bool) -> Result<Self, FigRefError> {
        let regex = RegexBuilder::new(pattern.unwrap_or(DEFAULT_PATTERN))
            .case_insensitive(case_insensitive)
            .build()
            .map_err(|e| FigRefError::Pattern(e.to_string()))?;
        if regex.captures_len() < 2 {
            return Err(FigRefError::Pattern("pattern needs a capture group for the label".into()));
        }
        Ok(FigRefDetector { regex })
    }

    pub fn is_reference(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }

    pub fn detect(&self, global_index: usize, text: &str) -> Vec<FigRefMatch> {
        self.regex
            .captures_iter(text)
            .filter_map(|caps| {
                let whole = caps.get(0)?;
                let label = caps.name("label").or_else(|| caps.get(1))?;
                let labels: Vec<String> = vec![label.as_str().split_whitespace().collect()];
                let start = text[..whole.start()].chars().count();
                let end = start + whole.as_str().chars().count();
                Some(FigRefMatch {
                    global_index,
                    labels,
                    span: (start, end),
                })
            })
            .collect()
    }

    /// Neighbors of the reference sentence at `ref_index` within `paragraph`.
    pub fn select_neighbors(
        &self,
        paragraph: &Paragraph,
        ref_index: usize,
        window: usize,
    ) -> Result<CandidateSet, FigRefError> {
        let is_ref: Vec<bool> = paragraph
            .sentences
            .iter()
            .map(|s| self.is_reference(&s.text))
            .collect();
        let ref_sentence = paragraph.sentences.get(ref_index).ok_or(FigRefError::OutOfRange {
            paragraph: paragraph.index,
            index: ref_index,
        })?;
        if !is_ref[ref_index] {
            return Err(FigRefError::NotReference {
                paragraph: paragraph.index,
                index: ref_index,
            });
        }
        let neighbor_indices = window_neighbors(&is_ref, ref_index, window)
            .into_iter()
            .map(|i| paragraph.sentences[i].global_index)
            .collect();
        Ok(CandidateSet {
            ref_global_index: ref_sentence.global_index,
            neighbor_indices,
        })
    }

    /// Every figure-referring sentence of `article` with its candidate set,
    /// in document order.
    pub fn scan_article(&self, article: &Article, window: usize) -> Vec<ReferenceSentence> {
        let mut out = Vec::new();
        for paragraph in &article.paragraphs {
            let is_ref: Vec<bool> = paragraph
                .sentences
                .iter()
                .map(|s| self.is_reference(&s.text))
                .collect();
            for (i, sentence) in paragraph.sentences.iter().enumerate() {
                if !is_ref[i] {
                    continue;
                }
                let neighbor_indices = window_neighbors(&is_ref, i, window)
                    .into_iter()
                    .map(|j| paragraph.sentences[j].global_index)
                    .collect();
                out.push(ReferenceSentence {
                    matches: self.detect(sentence.global_index, &sentence.text),
                    candidates: CandidateSet {
                        ref_global_index: sentence.global_index,
                        neighbor_indices,
                    },
                });
            }
        }
        out
    }

    /// Union of all neighbor sets of an article (the classification
    /// population), as global sentence indices.
    pub fn candidate_population(&self, article: &Article, window: usize) -> BTreeSet<usize> {
        self.scan_article(article, window)
            .into_iter()
            .flat_map(|r| r.candidates.neighbor_indices)
            .collect()
    }
}

/// Positions within a paragraph that fall inside the ±`window` range of
/// `ref_index`, skipping figure-referring positions. Returned in order.
pub fn window_neighbors(is_ref: &[bool], ref_index: usize, window: usize) -> Vec<usize> {
    let lo = ref_index.saturating_sub(window);
    let hi = (ref_index + window).min(is_ref.len().saturating_sub(1));
    (lo..ref_index)
        .chain(ref_index + 1..=hi)
        .filter(|&i| !is_ref[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Article;
    use std::collections::BTreeMap;

    fn labels(text: &str) -> Vec<String> {
        FigRefDetector::default()
            .detect(0, text)
            .into_iter()
            .flat_map(|m| m.labels)
            .collect()
    }

    #[test]
    fn detects_common_forms() {
        assert_eq!(labels("Fig.3 represents X."), vec!["3"]);
        assert_eq!(labels("Figure S1 and Figs 1-2 agree."), vec!["S1", "1-2"]);
        assert_eq!(labels("see figures 2, 4"), vec!["2,4"]);
        assert_eq!(labels("as in Fig. 3(a)"), vec!["3"]);
    }

    #[test]
    fn no_false_positives() {
        assert!(labels("The configuration is stable.").is_empty());
        assert!(labels("A figurative figure.").is_empty());
        assert!(labels("prefigure 3").is_empty());
    }

    #[test]
    fn span_is_in_characters() {
        let m = &FigRefDetector::default().detect(7, "Δ→ see Fig. 2")[0];
        assert_eq!(m.global_index, 7);
        assert_eq!(m.span, (7, 13));
    }

    #[test]
    fn case_sensitivity_flag() {
        let strict = FigRefDetector::new(Some(r"\b(?:Fig|Figure)\.?\s*(\d+)"), false).unwrap();
        assert!(strict.is_reference("Fig. 2"));
        assert!(!strict.is_reference("fig. 2"));
        assert!(FigRefDetector::new(Some("fig"), true).is_err());
    }

    fn paragraph(texts: &[&str]) -> Paragraph {
        Article::from_paragraphs("u", "", "", BTreeMap::new(), vec![texts.to_vec()])
            .unwrap()
            .paragraphs
            .remove(0)
    }

    #[test]
    fn full_window() {
        let p = paragraph(&["n0.", "n1.", "Fig. 1 shows x.", "n3.", "n4.", "n5."]);
        let c = FigRefDetector::default().select_neighbors(&p, 2, 2).unwrap();
        assert_eq!(c.neighbor_indices, vec![0, 1, 3, 4]);
    }

    #[test]
    fn clipped_at_paragraph_start() {
        let p = paragraph(&["Fig. 1 shows x.", "n1.", "n2."]);
        let c = FigRefDetector::default().select_neighbors(&p, 0, 2).unwrap();
        assert_eq!(c.neighbor_indices, vec![1, 2]);
    }

    #[test]
    fn adjacent_reference_is_discarded() {
        let p = paragraph(&["n0.", "Fig. 1 shows a.", "Fig. 2 shows b.", "n3."]);
        let c = FigRefDetector::default().select_neighbors(&p, 1, 2).unwrap();
        assert_eq!(c.neighbor_indices, vec![0, 3]);
    }

    #[test]
    fn precondition() {
        let p = paragraph(&["n0.", "n1."]);
        let d = FigRefDetector::default();
        assert!(matches!(d.select_neighbors(&p, 1, 2), Err(FigRefError::NotReference { .. })));
        assert!(matches!(d.select_neighbors(&p, 5, 2), Err(FigRefError::OutOfRange { .. })));
    }
}
