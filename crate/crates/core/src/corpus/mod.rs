//! Normalized article model and loaders.
//!
//! Articles arrive either as JSON (pre-segmented `body` or raw `body_raw`
//! paragraphs) or as a small neutral XML dialect (`article > body > para`).
//! Dependency parses are never produced here; they are read from CoNLL-U
//! sidecar files and aligned to sentences with [`attach_parses`].

mod conllu;
mod segment;

pub use conllu::{parse_conllu, ParsedSentence, Token};
pub use segment::{Segmenter, DEFAULT_ABBREVIATIONS};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("malformed XML at {position}: {message}")]
    Xml { position: String, message: String },
    #[error("CoNLL-U error at line {line}: {message}")]
    Conllu { line: usize, message: String },
    #[error("alignment error at sentence {global_index}: {message}")]
    Alignment { global_index: usize, message: String },
}

impl CorpusError {
    fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        CorpusError::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub paragraph_index: usize,
    pub index_in_paragraph: usize,
    pub global_index: usize,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse: Option<ParsedSentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paragraph {
    pub index: usize,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Article {
    pub uid: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub paragraphs: Vec<Paragraph>,
    pub metadata: BTreeMap<String, String>,
}

impl Article {
    /// Builds an article from pre-segmented paragraphs, assigning indices.
    ///
    /// Sentences are trimmed; a sentence that is empty after trimming is a
    /// schema error.
    pub fn from_paragraphs<P, S>(
        uid: impl Into<String>,
        title: impl Into<String>,
        abstract_text: impl Into<String>,
        metadata: BTreeMap<String, String>,
        paragraphs: P,
    ) -> Result<Article, CorpusError>
    where
        P: IntoIterator,
        P::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let uid = uid.into();
        if uid.trim().is_empty() {
            return Err(CorpusError::schema("uid", "must be a nonempty string"));
        }
        let mut global_index = 0;
        let mut out = Vec::new();
        for (p, sentences) in paragraphs.into_iter().enumerate() {
            let mut para = Paragraph {
                index: p,
                sentences: Vec::new(),
            };
            for (s, text) in sentences.into_iter().enumerate() {
                let text = text.as_ref().trim();
                if text.is_empty() {
                    return Err(CorpusError::schema(
                        format!("body[{p}][{s}]"),
                        "sentence is empty",
                    ));
                }
                para.sentences.push(Sentence {
                    paragraph_index: p,
                    index_in_paragraph: s,
                    global_index,
                    text: text.to_string(),
                    parse: None,
                });
                global_index += 1;
            }
            out.push(para);
        }
        Ok(Article {
            uid,
            title: title.into(),
            abstract_text: abstract_text.into(),
            paragraphs: out,
            metadata,
        })
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.paragraphs.iter().flat_map(|p| p.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.paragraphs.iter().map(|p| p.sentences.len()).sum()
    }

    pub fn sentence(&self, global_index: usize) -> Option<&Sentence> {
        self.sentences().find(|s| s.global_index == global_index)
    }

    /// Serializes to the article JSON schema with a pre-segmented `body`.
    /// Parses are not part of the schema and are dropped.
    pub fn to_json(&self) -> String {
        let body: Vec<Vec<&str>> = self
            .paragraphs
            .iter()
            .map(|p| p.sentences.iter().map(|s| s.text.as_str()).collect())
            .collect();
        let value = serde_json::json!({
            "uid": self.uid,
            "title": self.title,
            "abstract": self.abstract_text,
            "metadata": self.metadata,
            "body": body,
        });
        serde_json::to_string(&value).expect("article JSON is always serializable")
    }
}

/// Converts serde_json's 1-based line/column into a byte offset.
fn byte_offset(text: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut current = 1;
    let mut offset = 0;
    for (i, b) in text.iter().enumerate() {
        if current == line {
            break;
        }
        if *b == b'\n' {
            current += 1;
            offset = i + 1;
        }
    }
    (offset + column.saturating_sub(1)).min(text.len())
}

pub(crate) fn json_error(bytes: &[u8], err: &serde_json::Error) -> CorpusError {
    CorpusError::Json {
        offset: byte_offset(bytes, err.line(), err.column()),
        message: err.to_string(),
    }
}

fn optional_string(obj: &serde_json::Map<String, Value>, field: &str) -> Result<String, CorpusError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(String::new()),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(CorpusError::schema(field, "expected a string")),
    }
}

/// Loads an article from the JSON interchange format.
pub fn load_article_json(bytes: &[u8]) -> Result<Article, CorpusError> {
    load_article_json_with(bytes, &Segmenter::default())
}

/// Like [`load_article_json`], using `segmenter` for `body_raw` paragraphs.
pub fn load_article_json_with(bytes: &[u8], segmenter: &Segmenter) -> Result<Article, CorpusError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| json_error(bytes, &e))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CorpusError::schema("<root>", "expected a JSON object"))?;

    let uid = match obj.get("uid") {
        Some(Value::String(s)) if !s.trim().is_empty() => s.clone(),
        Some(Value::String(_)) => return Err(CorpusError::schema("uid", "must be nonempty")),
        Some(_) => return Err(CorpusError::schema("uid", "expected a string")),
        None => return Err(CorpusError::schema("uid", "missing required field")),
    };
    let title = optional_string(obj, "title")?;
    let abstract_text = optional_string(obj, "abstract")?;

    let mut metadata = BTreeMap::new();
    match obj.get("metadata") {
        None | Some(Value::Null) => {}
        Some(Value::Object(map)) => {
            for (k, v) in map {
                let v = v
                    .as_str()
                    .ok_or_else(|| CorpusError::schema(format!("metadata.{k}"), "expected a string"))?;
                metadata.insert(k.clone(), v.to_string());
            }
        }
        Some(_) => return Err(CorpusError::schema("metadata", "expected an object")),
    }

    let paragraphs: Vec<Vec<String>> = if let Some(body) = obj.get("body") {
        let body = body
            .as_array()
            .ok_or_else(|| CorpusError::schema("body", "expected a list of paragraphs"))?;
        body.iter()
            .enumerate()
            .map(|(p, para)| {
                let para = para
                    .as_array()
                    .ok_or_else(|| CorpusError::schema(format!("body[{p}]"), "expected a list of sentences"))?;
                para.iter()
                    .enumerate()
                    .map(|(s, sent)| {
                        sent.as_str().map(str::to_string).ok_or_else(|| {
                            CorpusError::schema(format!("body[{p}][{s}]"), "expected a string")
                        })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?
    } else if let Some(raw) = obj.get("body_raw") {
        let raw = raw
            .as_array()
            .ok_or_else(|| CorpusError::schema("body_raw", "expected a list of paragraph strings"))?;
        raw.iter()
            .enumerate()
            .map(|(p, para)| {
                para.as_str()
                    .map(|t| segmenter.segment(t))
                    .ok_or_else(|| CorpusError::schema(format!("body_raw[{p}]"), "expected a string"))
            })
            .collect::<Result<_, _>>()?
    } else {
        return Err(CorpusError::schema("body", "missing required field (or `body_raw`)"));
    };

    Article::from_paragraphs(uid, title, abstract_text, metadata, paragraphs)
}

fn element_text(node: roxmltree::Node<'_, '_>) -> String {
    let raw: String = node
        .descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect();
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Loads an article from the neutral XML schema
/// `article > (title?, abstract?, body > para+)`.
///
/// The uid comes from the `uid` attribute of `<article>` (or a `<uid>`
/// child). Without one, a stable uid is derived from the content hash.
pub fn load_article_xml(bytes: &[u8]) -> Result<Article, CorpusError> {
    load_article_xml_with(bytes, &Segmenter::default())
}

pub fn load_article_xml_with(bytes: &[u8], segmenter: &Segmenter) -> Result<Article, CorpusError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CorpusError::Xml {
        position: format!("byte {}", e.valid_up_to()),
        message: "input is not valid UTF-8".into(),
    })?;
    let doc = roxmltree::Document::parse(text).map_err(|e| CorpusError::Xml {
        position: e.pos().to_string(),
        message: e.to_string(),
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "article" {
        return Err(CorpusError::schema(
            "article",
            format!("root element is <{}>", root.tag_name().name()),
        ));
    }

    let child = |name: &str| root.children().find(|n| n.is_element() && n.tag_name().name() == name);
    let body = child("body").ok_or_else(|| CorpusError::schema("body", "no <body> element"))?;

    let uid = root
        .attribute("uid")
        .map(str::to_string)
        .or_else(|| child("uid").map(element_text))
        .filter(|u| !u.trim().is_empty())
        .unwrap_or_else(|| {
            let digest = Sha256::digest(bytes);
            format!("xml-{}", &hex::encode(digest)[..12])
        });
    let title = child("title").map(element_text).unwrap_or_default();
    let abstract_text = child("abstract").map(element_text).unwrap_or_default();
    let metadata: BTreeMap<String, String> = root
        .attributes()
        .filter(|a| a.name() != "uid")
        .map(|a| (a.name().to_string(), a.value().to_string()))
        .collect();

    let paragraphs: Vec<Vec<String>> = body
        .children()
        .filter(|n| n.is_element() && n.tag_name().name() == "para")
        .map(|p| segmenter.segment(&element_text(p)))
        .collect();

    Article::from_paragraphs(uid, title, abstract_text, metadata, paragraphs)
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Attaches one parsed block per sentence, in document order.
///
/// Token forms of each block, concatenated, must reproduce the sentence
/// text once whitespace is removed.
pub fn attach_parses(mut article: Article, blocks: &[ParsedSentence]) -> Result<Article, CorpusError> {
    let count = article.sentence_count();
    if blocks.len() != count {
        return Err(CorpusError::Alignment {
            global_index: blocks.len().min(count),
            message: format!(
                "article `{}` has {count} sentences but the sidecar has {} blocks",
                article.uid,
                blocks.len()
            ),
        });
    }
    for sentence in article.paragraphs.iter_mut().flat_map(|p| p.sentences.iter_mut()) {
        let block = &blocks[sentence.global_index];
        let forms: String = block.tokens.iter().map(|t| squash(&t.form)).collect();
        if forms != squash(&sentence.text) {
            return Err(CorpusError::Alignment {
                global_index: sentence.global_index,
                message: format!(
                    "tokens of `{}` sentence {} do not match its text",
                    article.uid, sentence.global_index
                ),
            });
        }
        sentence.parse = Some(block.clone());
    }
    Ok(article)
}
