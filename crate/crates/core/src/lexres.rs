//! Synonym sets and word-embedding similarity, used to resolve verbs the
//! lexicon does not define.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOP_K: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LexresError {
    #[error("malformed synset JSON: {0}")]
    Json(String),
    #[error("synset schema error for `{lemma}`: {message}")]
    Schema { lemma: String, message: String },
    #[error("embedding format error at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("`{0}` is not in the embedding vocabulary")]
    OutOfVocabulary(String),
    #[error("k must be at least 1")]
    InvalidK,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SynsetLexicon {
    entries: BTreeMap<String, Vec<Vec<String>>>,
}

/// Parses `{lemma: [[lemma, ...], ...]}`. Lemmas are lowercased.
pub fn load_synsets(bytes: &[u8]) -> Result<SynsetLexicon, LexresError> {
    let raw: BTreeMap<String, Vec<Vec<String>>> =
        serde_json::from_slice(bytes).map_err(|e| LexresError::Json(e.to_string()))?;
    let mut entries = BTreeMap::new();
    for (lemma, synsets) in raw {
        let key = lemma.trim().to_lowercase();
        if key.is_empty() {
            return Err(LexresError::Schema {
                lemma,
                message: "empty head lemma".into(),
            });
        }
        let mut cleaned = Vec::with_capacity(synsets.len());
        for (i, synset) in synsets.into_iter().enumerate() {
            let members: Vec<String> = synset
                .iter()
                .map(|m| m.trim().to_lowercase())
                .filter(|m| !m.is_empty())
                .collect();
            if members.is_empty() {
                return Err(LexresError::Schema {
                    lemma: key,
                    message: format!("synset {i} is empty"),
                });
            }
            cleaned.push(members);
        }
        entries.insert(key, cleaned);
    }
    Ok(SynsetLexicon { entries })
}

impl SynsetLexicon {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn synsets(&self, lemma: &str) -> &[Vec<String>] {
        self.entries.get(&lemma.to_lowercase()).map_or(&[], Vec::as_slice)
    }

    /// Synonyms in synset order, deduplicated, without the query itself.
    pub fn synonyms_ordered(&self, verb: &str) -> Vec<String> {
        let verb = verb.to_lowercase();
        let mut seen = BTreeSet::new();
        self.synsets(&verb)
            .iter()
            .flatten()
            .filter(|l| **l != verb && seen.insert(l.as_str()))
            .cloned()
            .collect()
    }

    pub fn synonyms(&self, verb: &str) -> BTreeSet<String> {
        self.synonyms_ordered(verb).into_iter().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("synsets serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

/// Reads the word2vec text format: a `<vocab_size> <dim>` header, then
/// one `<word> <f1> ... <fdim>` row per line.
pub fn load_embeddings(bytes: &[u8]) -> Result<EmbeddingStore, LexresError> {
    let text = std::str::from_utf8(bytes).map_err(|e| LexresError::Format {
        line: 0,
        message: format!("invalid UTF-8: {e}"),
    })?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(LexresError::Format {
        line: 1,
        message: "missing header".into(),
    })?;
    let header: Vec<&str> = header.split_whitespace().collect();
    let parse_header = |s: Option<&&str>| s.and_then(|v| v.parse::<usize>().ok());
    let (declared, dim) = match (parse_header(header.first()), parse_header(header.get(1)), header.len()) {
        (Some(n), Some(d), 2) if d > 0 => (n, d),
        _ => {
            return Err(LexresError::Format {
                line: 1,
                message: "header must be `<vocab_size> <dim>` with dim > 0".into(),
            })
        }
    };

    let mut store = EmbeddingStore {
        dim,
        words: Vec::with_capacity(declared),
        vectors: Vec::with_capacity(declared),
        index: HashMap::with_capacity(declared),
    };
    for (n, line) in lines {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(' ').filter(|p| !p.is_empty());
        let word = parts.next().expect("non-blank line has a first field");
        let vector = parts
            .map(|p| {
                p.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| LexresError::Format {
                        line: line_no,
                        message: format!("`{p}` is not a finite number"),
                    })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if vector.len() != dim {
            return Err(LexresError::Format {
                line: line_no,
                message: format!("expected {dim} components, found {}", vector.len()),
            });
        }
        store.insert(word, vector);
    }
    if store.len() != declared {
        log::warn!("embedding header declares {declared} words, file holds {}", store.len());
    }
    Ok(store)
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Descending similarity, then ascending word.
fn rank(a: &(String, f64), b: &(String, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

impl EmbeddingStore {
    pub fn new(dim: usize) -> Self {
        EmbeddingStore {
            dim,
            words: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Adds or replaces a vector. A duplicate word keeps the newest vector.
    ///
    /// Panics if the vector length differs from the store dimension.
    pub fn insert(&mut self, word: &str, vector: Vec<f64>) {
        assert_eq!(vector.len(), self.dim, "vector dimension mismatch");
        match self.index.get(word) {
            Some(&i) => {
                log::warn!("duplicate embedding for `{word}`; keeping the last one");
                self.vectors[i] = vector;
            }
            None => {
                self.index.insert(word.to_string(), self.words.len());
                self.words.push(word.to_string());
                self.vectors.push(vector);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&i| self.vectors[i].as_slice())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// The `k` nearest words to `word` by cosine similarity, excluding the
    /// word itself. Ties are broken lexicographically.
    pub fn top_k_similar(&self, word: &str, k: usize) -> Result<Vec<(String, f64)>, LexresError> {
        if k == 0 {
            return Err(LexresError::InvalidK);
        }
        let query = self
            .vector(word)
            .ok_or_else(|| LexresError::OutOfVocabulary(word.to_string()))?;
        let mut scored: Vec<(String, f64)> = self
            .words
            .iter()
            .zip(&self.vectors)
            .filter(|(w, _)| w.as_str() != word)
            .map(|(w, v)| (w.clone(), cosine(query, v)))
            .collect();
        if scored.len() > k {
            scored.select_nth_unstable_by(k - 1, rank);
            scored.truncate(k);
        }
        scored.sort_by(rank);
        Ok(scored)
    }
}

/// Synonym and embedding resources bundled for verb resolution.
#[derive(Debug, Clone)]
pub struct LexicalResources {
    pub synsets: SynsetLexicon,
    pub embeddings: Option<EmbeddingStore>,
    pub top_k: usize,
}

impl LexicalResources {
    pub fn new(synsets: SynsetLexicon, embeddings: Option<EmbeddingStore>) -> Self {
        LexicalResources {
            synsets,
            embeddings,
            top_k: DEFAULT_TOP_K,
        }
    }

    pub fn candidate_verb_lemmas(&self, verb: &str) -> Vec<String> {
        candidate_verb_lemmas(&self.synsets, self.embeddings.as_ref(), verb, self.top_k)
    }
}

/// Synonyms of `verb` that are also among its `k` nearest embedding
/// neighbors, in embedding-rank order. When the verb has no vector (or no
/// store is given) all synonyms are returned in synset order.
pub fn candidate_verb_lemmas(
    lexicon: &SynsetLexicon,
    store: Option<&EmbeddingStore>,
    verb: &str,
    k: usize,
) -> Vec<String> {
    let synonyms = lexicon.synonyms_ordered(verb);
    if synonyms.is_empty() {
        return Vec::new();
    }
    let verb = verb.to_lowercase();
    match store.map(|s| s.top_k_similar(&verb, k.max(1))) {
        Some(Ok(neighbors)) => {
            let wanted: BTreeSet<&str> = synonyms.iter().map(String::as_str).collect();
            neighbors
                .into_iter()
                .map(|(w, _)| w)
                .filter(|w| wanted.contains(w.as_str()))
                .collect()
        }
        _ => synonyms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synsets_load() {
        let lex = load_synsets(br#"{"show": [["show","demonstrate","exhibit"]]}"#).unwrap();
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.synsets("show").len(), 1);
        let syn = lex.synonyms("show");
        assert!(syn.contains("demonstrate") && syn.contains("exhibit"));
        assert!(!syn.contains("show"));
        assert!(lex.synonyms("absent").is_empty());
        assert!(matches!(load_synsets(br#"{"show": [[]]}"#), Err(LexresError::Schema { .. })));
        assert!(matches!(load_synsets(b"{"), Err(LexresError::Json(_))));
    }

    #[test]
    fn embeddings_load() {
        let store = load_embeddings(b"2 3\na 1 0 0\nb 0 1 0\n").unwrap();
        assert_eq!((store.len(), store.dim()), (2, 3));
        assert!(matches!(
            load_embeddings(b"2 3\na 1 0 0\nb 0 1\n"),
            Err(LexresError::Format { line: 3, .. })
        ));
        assert!(matches!(load_embeddings(b"1 2\na nan 1\n"), Err(LexresError::Format { line: 2, .. })));
        let dup = load_embeddings(b"2 2\na 1 0\na 0 1\n").unwrap();
        assert_eq!(dup.len(), 1);
        assert_eq!(dup.vector("a").unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn top_k_hand_computed() {
        let store = load_embeddings(b"3 2\na 1 0\nb 1 0\nc 0 1\n").unwrap();
        let top = store.top_k_similar("a", 2).unwrap();
        assert_eq!(top, vec![("b".to_string(), 1.0), ("c".to_string(), 0.0)]);
        assert!(matches!(store.top_k_similar("zz", 2), Err(LexresError::OutOfVocabulary(_))));
        assert!(matches!(store.top_k_similar("a", 0), Err(LexresError::InvalidK)));
        assert_eq!(store.top_k_similar("a", 10).unwrap().len(), 2);
    }

    #[test]
    fn candidates_intersect_in_rank_order() {
        let lex = load_synsets(br#"{"v": [["v","p","q"],["r"]]}"#).unwrap();
        let store = load_embeddings(b"5 2\nv 1 0\nq 0.9 0.1\nx 0.8 0.2\nr 0.7 0.3\np -1 0\n").unwrap();
        assert_eq!(candidate_verb_lemmas(&lex, Some(&store), "v", 3), vec!["q", "r"]);
        assert_eq!(candidate_verb_lemmas(&lex, Some(&store), "v", 20), vec!["q", "r", "p"]);
        assert!(candidate_verb_lemmas(&lex, Some(&store), "nothing", 3).is_empty());
        // out of vocabulary falls back to synset order
        let lex = load_synsets(br#"{"w": [["p","q"]]}"#).unwrap();
        assert_eq!(candidate_verb_lemmas(&lex, Some(&store), "w", 3), vec!["p", "q"]);
        assert_eq!(candidate_verb_lemmas(&lex, None, "w", 3), vec!["p", "q"]);
    }
}
