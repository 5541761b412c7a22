//! Concept graph and lexicon.
//!
//! Concepts hang under the two roots `EVENT` and `OBJECT` via IS-A links.
//! Properties are typed (case roles, causality, attributes, hierarchy,
//! mereology) and ATTRIBUTE properties carry a literal value domain. The
//! lexicon maps `(lemma, pos)` to ordered senses, each either a concept or
//! a property with an optional literal value.
//!
//! Two serializations are accepted, the line format
//!
//! ```text
//! concept DRAWING is-a GRAPHICAL-REPRESENTATION
//! property SHAPE kind ATTRIBUTE values polygonal,straight,round domain OBJECT
//! property AGENT kind CASE-ROLE domain EVENT range OBJECT
//! lex linear pos ADJ -> property SHAPE=straight
//! lex figure pos NOUN -> concept DRAWING
//! ```
//!
//! and a JSON mirror of the same records (see [`OntologyFile`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const EVENT: &str = "EVENT";
pub const OBJECT: &str = "OBJECT";
/// Name reserved for sentence-scoped placeholder nodes.
pub const UNKNOWN: &str = "UNKNOWN";

/// The bundled ontology and lexicon.
pub const BUNDLED_ONTOLOGY: &str = include_str!("../data/ontology.txt");

pub const REQUIRED_CASE_ROLES: [&str; 4] = ["AGENT", "THEME", "THEME-INFORMATION", "INSTRUMENT"];
pub const REQUIRED_CAUSALITY: [&str; 1] = ["CAUSED-BY"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OntologyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("malformed ontology JSON: {0}")]
    Json(String),
    #[error("IS-A cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("integrity error at `{entity}`: {message}")]
    Integrity { entity: String, message: String },
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("cannot complete path for `{property}`: {message}")]
    Completion { property: String, message: String },
}

fn integrity(entity: &str, message: impl Into<String>) -> OntologyError {
    OntologyError::Integrity {
        entity: entity.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RootCategory {
    Event,
    Object,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub name: String,
    /// IS-A parents in declaration order; the first one drives distances.
    pub parents: Vec<String>,
    pub root_category: RootCategory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyKind {
    #[serde(rename = "CASE-ROLE")]
    CaseRole,
    #[serde(rename = "CAUSALITY")]
    Causality,
    #[serde(rename = "ATTRIBUTE")]
    Attribute,
    #[serde(rename = "HIERARCHY")]
    Hierarchy,
    #[serde(rename = "MEREOLOGY")]
    Mereology,
}

impl PropertyKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_uppercase().as_str() {
            "CASE-ROLE" => PropertyKind::CaseRole,
            "CAUSALITY" => PropertyKind::Causality,
            "ATTRIBUTE" => PropertyKind::Attribute,
            "HIERARCHY" | "IS-A" => PropertyKind::Hierarchy,
            "MEREOLOGY" | "PART-WHOLE" => PropertyKind::Mereology,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::CaseRole => "CASE-ROLE",
            PropertyKind::Causality => "CAUSALITY",
            PropertyKind::Attribute => "ATTRIBUTE",
            PropertyKind::Hierarchy => "HIERARCHY",
            PropertyKind::Mereology => "MEREOLOGY",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyDef {
    pub name: String,
    pub kind: PropertyKind,
    /// Literal values, for ATTRIBUTE properties.
    #[serde(default)]
    pub values: Vec<String>,
    /// Concepts the property may be attached to (its bearers).
    #[serde(default)]
    pub domain: Vec<String>,
    /// Concepts allowed as filler, for relations between concepts.
    #[serde(default)]
    pub range: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_uppercase().as_str() {
            "NOUN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            "ADV" => Pos::Adv,
            _ => return None,
        })
    }

    /// Maps a Universal POS tag onto a lexicon part of speech.
    pub fn from_upos(upos: &str) -> Option<Self> {
        Some(match upos {
            "NOUN" | "PROPN" | "PRON" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            "ADV" => Pos::Adv,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Sense {
    Concept { name: String },
    Property { name: String, value: Option<String> },
}

impl Sense {
    pub fn concept(name: &str) -> Sense {
        Sense::Concept { name: name.into() }
    }

    pub fn property(name: &str, value: Option<&str>) -> Sense {
        Sense::Property {
            name: name.into(),
            value: value.map(str::to_string),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Sense::Concept { name } | Sense::Property { name, .. } => name,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Concept { name } => write!(f, "concept {name}"),
            Sense::Property { name, value: Some(v) } => write!(f, "property {name}={v}"),
            Sense::Property { name, value: None } => write!(f, "property {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEntry {
    pub lemma: String,
    pub pos: Pos,
    pub sense: Sense,
    /// Lower is preferred; defaults to declaration order within `(lemma, pos)`.
    pub priority: u32,
}

/// JSON mirror of the line format.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OntologyFile {
    #[serde(default)]
    pub concepts: Vec<ConceptRecord>,
    #[serde(default)]
    pub properties: Vec<PropertyDef>,
    #[serde(default)]
    pub lexicon: Vec<LexRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConceptRecord {
    pub name: String,
    #[serde(default)]
    pub parents: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LexRecord {
    pub lemma: String,
    pub pos: Pos,
    pub sense: Sense,
    #[serde(default)]
    pub priority: Option<u32>,
}

/// A node on a completed path. Placeholders are never stored in the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathNode {
    Concept(String),
    Property(String),
    Value(String),
    UnknownObject,
    UnknownValue,
}

impl PathNode {
    pub fn label(&self) -> &str {
        match self {
            PathNode::Concept(s) | PathNode::Property(s) | PathNode::Value(s) => s,
            PathNode::UnknownObject | PathNode::UnknownValue => UNKNOWN,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, PathNode::UnknownObject | PathNode::UnknownValue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyGraph {
    concepts: BTreeMap<String, Concept>,
    properties: BTreeMap<String, PropertyDef>,
    lexicon: BTreeMap<(String, Pos), Vec<LexEntry>>,
    concept_order: Vec<String>,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(str::to_string).collect()
}

fn parse_lines(text: &str) -> Result<OntologyFile, OntologyError> {
    let mut file = OntologyFile::default();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| OntologyError::Syntax { line: line_no, message };
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "concept" => {
                let name = words.get(1).ok_or_else(|| syntax("concept needs a name".into()))?;
                let parents = match &words[2..] {
                    [] => Vec::new(),
                    ["is-a", list] => split_list(list),
                    _ => return Err(syntax("expected `concept NAME [is-a P1,P2]`".into())),
                };
                file.concepts.push(ConceptRecord {
                    name: name.to_string(),
                    parents,
                });
            }
            "property" => {
                let name = words.get(1).ok_or_else(|| syntax("property needs a name".into()))?;
                if words.get(2) != Some(&"kind") || words.len() < 4 {
                    return Err(syntax("expected `property NAME kind KIND ...`".into()));
                }
                let kind = PropertyKind::parse(words[3])
                    .ok_or_else(|| syntax(format!("unknown property kind `{}`", words[3])))?;
                let mut def = PropertyDef {
                    name: name.to_string(),
                    kind,
                    values: Vec::new(),
                    domain: Vec::new(),
                    range: Vec::new(),
                };
                let mut rest = words[4..].iter();
                while let Some(key) = rest.next() {
                    let list = rest.next().ok_or_else(|| syntax(format!("`{key}` needs a list")))?;
                    match *key {
                        "values" => def.values = split_list(list),
                        "domain" => def.domain = split_list(list),
                        "range" => def.range = split_list(list),
                        other => return Err(syntax(format!("unknown clause `{other}`"))),
                    }
                }
                file.properties.push(def);
            }
            "lex" => {
                // lex LEMMA pos POS -> concept NAME | property NAME[=VALUE] [priority N]
                let bad = || syntax("expected `lex LEMMA pos POS -> concept NAME | property NAME[=VALUE]`".into());
                if words.len() < 7 || words[2] != "pos" || words[4] != "->" {
                    return Err(bad());
                }
                let pos = Pos::parse(words[3]).ok_or_else(|| syntax(format!("unknown pos `{}`", words[3])))?;
                let sense = match words[5] {
                    "concept" => Sense::concept(words[6]),
                    "property" => match words[6].split_once('=') {
                        Some((p, v)) => Sense::property(p, Some(v)),
                        None => Sense::property(words[6], None),
                    },
                    _ => return Err(bad()),
                };
                let priority = match &words[7..] {
                    [] => None,
                    ["priority", n] => Some(n.parse().map_err(|_| syntax(format!("bad priority `{n}`")))?),
                    _ => return Err(bad()),
                };
                file.lexicon.push(LexRecord {
                    lemma: words[1].to_string(),
                    pos,
                    sense,
                    priority,
                });
            }
            other => return Err(syntax(format!("unknown record type `{other}`"))),
        }
    }
    Ok(file)
}

/// Loads and validates an ontology from the line format or its JSON mirror.
pub fn load_ontology(bytes: &[u8]) -> Result<OntologyGraph, OntologyError> {
    let text = std::str::from_utf8(bytes).map_err(|e| OntologyError::Syntax {
        line: 0,
        message: format!("invalid UTF-8: {e}"),
    })?;
    let file = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| OntologyError::Json(e.to_string()))?
    } else {
        parse_lines(text)?
    };
    OntologyGraph::from_file(file)
}

impl OntologyGraph {
    pub fn bundled() -> OntologyGraph {
        load_ontology(BUNDLED_ONTOLOGY.as_bytes()).expect("bundled ontology is valid")
    }

    pub fn from_file(file: OntologyFile) -> Result<OntologyGraph, OntologyError> {
        let mut parents: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut concept_order = Vec::new();
        for c in &file.concepts {
            if c.name == UNKNOWN {
                return Err(integrity(&c.name, "name is reserved for placeholders"));
            }
            if parents.insert(c.name.clone(), c.parents.clone()).is_some() {
                return Err(integrity(&c.name, "duplicate concept"));
            }
            concept_order.push(c.name.clone());
        }
        for root in [EVENT, OBJECT] {
            match parents.get(root) {
                None => return Err(integrity(root, "root concept is not declared")),
                Some(p) if !p.is_empty() => return Err(integrity(root, "root concept cannot have parents")),
                _ => {}
            }
        }
        for (name, ps) in &parents {
            if ps.is_empty() && name != EVENT && name != OBJECT {
                return Err(integrity(name, "concept has no IS-A parent and is not a root"));
            }
            for p in ps {
                if !parents.contains_key(p) {
                    return Err(integrity(name, format!("IS-A parent `{p}` is not declared")));
                }
            }
        }
        if let Some(cycle) = find_cycle(&parents) {
            return Err(OntologyError::Cycle(cycle));
        }

        let mut concepts = BTreeMap::new();
        for name in &concept_order {
            let roots = reachable_roots(&parents, name);
            let root_category = match (roots.contains(EVENT), roots.contains(OBJECT)) {
                (true, false) => RootCategory::Event,
                (false, true) => RootCategory::Object,
                _ => return Err(integrity(name, "concept must reach exactly one of EVENT or OBJECT")),
            };
            concepts.insert(
                name.clone(),
                Concept {
                    name: name.clone(),
                    parents: parents[name].clone(),
                    root_category,
                },
            );
        }

        let mut properties = BTreeMap::new();
        for p in file.properties {
            if p.name == UNKNOWN {
                return Err(integrity(&p.name, "name is reserved for placeholders"));
            }
            if concepts.contains_key(&p.name) {
                return Err(integrity(&p.name, "name is used by both a concept and a property"));
            }
            for c in p.domain.iter().chain(&p.range) {
                if !concepts.contains_key(c) {
                    return Err(integrity(&p.name, format!("references undeclared concept `{c}`")));
                }
            }
            if p.kind == PropertyKind::Attribute && p.values.is_empty() {
                return Err(integrity(&p.name, "ATTRIBUTE property needs a nonempty value domain"));
            }
            let name = p.name.clone();
            if properties.insert(name.clone(), p).is_some() {
                return Err(integrity(&name, "duplicate property"));
            }
        }
        for (required, kind) in REQUIRED_CASE_ROLES
            .iter()
            .map(|r| (r, PropertyKind::CaseRole))
            .chain(REQUIRED_CAUSALITY.iter().map(|r| (r, PropertyKind::Causality)))
        {
            match properties.get(*required) {
                Some(p) if p.kind == kind => {}
                _ => return Err(integrity(required, format!("required {} property is missing", kind.as_str()))),
            }
        }

        let mut lexicon: BTreeMap<(String, Pos), Vec<LexEntry>> = BTreeMap::new();
        for rec in file.lexicon {
            let lemma = rec.lemma.to_lowercase();
            let entity = format!("lex {lemma}/{}", rec.pos.as_str());
            match &rec.sense {
                Sense::Concept { name } => {
                    if !concepts.contains_key(name) {
                        return Err(integrity(&entity, format!("undeclared concept `{name}`")));
                    }
                }
                Sense::Property { name, value } => {
                    let def = properties
                        .get(name)
                        .ok_or_else(|| integrity(&entity, format!("undeclared property `{name}`")))?;
                    if let Some(v) = value {
                        if !def.values.contains(v) {
                            return Err(integrity(&entity, format!("`{v}` is not a value of {name}")));
                        }
                    }
                }
            }
            let entries = lexicon.entry((lemma.clone(), rec.pos)).or_default();
            if entries.iter().any(|e| e.sense == rec.sense) {
                return Err(integrity(&entity, format!("duplicate sense {}", rec.sense)));
            }
            let priority = rec.priority.unwrap_or(entries.len() as u32);
            entries.push(LexEntry {
                lemma,
                pos: rec.pos,
                sense: rec.sense,
                priority,
            });
        }
        for entries in lexicon.values_mut() {
            entries.sort_by_key(|e| e.priority);
        }

        Ok(OntologyGraph {
            concepts,
            properties,
            lexicon,
            concept_order,
        })
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.get(name)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyDef> {
        self.properties.get(name)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concept_order.iter().map(|n| &self.concepts[n])
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDef> {
        self.properties.values()
    }

    pub fn lex_entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.lexicon.values().flatten()
    }

    pub fn concept_count(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_root(name: &str) -> bool {
        name == EVENT || name == OBJECT
    }

    /// First-parent IS-A chain from the concept's parent up to its root.
    pub fn ancestors(&self, name: &str) -> Result<Vec<String>, OntologyError> {
        let mut current = self
            .concepts
            .get(name)
            .ok_or_else(|| OntologyError::UnknownConcept(name.to_string()))?;
        let mut chain = Vec::new();
        while let Some(parent) = current.parents.first() {
            chain.push(parent.clone());
            current = &self.concepts[parent];
        }
        Ok(chain)
    }

    /// True when `concept` is `ancestor` or reaches it through any IS-A path.
    pub fn subsumed_by(&self, concept: &str, ancestor: &str) -> bool {
        let mut stack = vec![concept];
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if c == ancestor {
                return true;
            }
            if seen.insert(c) {
                if let Some(def) = self.concepts.get(c) {
                    stack.extend(def.parents.iter().map(String::as_str));
                }
            }
        }
        false
    }

    /// Whether `a` and `b` lie on one IS-A line (either subsumes the other).
    pub fn compatible(&self, a: &str, b: &str) -> bool {
        self.subsumed_by(a, b) || self.subsumed_by(b, a)
    }

    /// All senses for `(lemma, pos)` by ascending priority.
    pub fn lookup_senses(&self, lemma: &str, pos: Pos) -> Vec<LexEntry> {
        self.lexicon
            .get(&(lemma.to_lowercase(), pos))
            .cloned()
            .unwrap_or_default()
    }

    /// Whether some OBJECT-side concept can bear `property`.
    pub fn has_object_bearer(&self, property: &PropertyDef) -> bool {
        property
            .domain
            .iter()
            .any(|d| self.concepts.get(d).is_some_and(|c| c.root_category == RootCategory::Object))
    }

    /// Completes the path from an event to an ATTRIBUTE sense.
    ///
    /// With `bearer` absent the object carrying the property is unknown and
    /// a placeholder is inserted between the event and the property; an
    /// unspecified literal becomes a value placeholder. Nothing is added to
    /// the graph itself.
    pub fn complete_path(
        &self,
        event: &str,
        property: &str,
        value: Option<&str>,
        bearer: Option<&str>,
    ) -> Result<Vec<PathNode>, OntologyError> {
        if !self.concepts.contains_key(event) {
            return Err(OntologyError::UnknownConcept(event.to_string()));
        }
        let def = self
            .properties
            .get(property)
            .ok_or_else(|| OntologyError::UnknownProperty(property.to_string()))?;
        let completion = |message: &str| OntologyError::Completion {
            property: property.to_string(),
            message: message.to_string(),
        };
        if def.kind != PropertyKind::Attribute {
            return Err(completion("not an ATTRIBUTE property"));
        }
        let value_node = match value {
            Some(v) if def.values.iter().any(|x| x == v) => PathNode::Value(v.to_string()),
            Some(_) => return Err(completion("value outside the property's value domain")),
            None => PathNode::UnknownValue,
        };
        match bearer {
            Some(b) => {
                if !self.concepts.contains_key(b) {
                    return Err(OntologyError::UnknownConcept(b.to_string()));
                }
                if !def.domain.iter().any(|d| self.subsumed_by(b, d)) {
                    return Err(completion("bearer is outside the property's domain"));
                }
                Ok(vec![
                    PathNode::Concept(b.to_string()),
                    PathNode::Property(property.to_string()),
                    value_node,
                ])
            }
            None => {
                if !self.has_object_bearer(def) {
                    return Err(completion("no object concept can bear this property"));
                }
                Ok(vec![
                    PathNode::Concept(event.to_string()),
                    PathNode::UnknownObject,
                    PathNode::Property(property.to_string()),
                    value_node,
                ])
            }
        }
    }

    /// Canonical line-format dump; equal graphs dump identically.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for c in self.concepts() {
            if c.parents.is_empty() {
                out.push_str(&format!("concept {}\n", c.name));
            } else {
                out.push_str(&format!("concept {} is-a {}\n", c.name, c.parents.join(",")));
            }
        }
        for p in self.properties.values() {
            out.push_str(&format!("property {} kind {}", p.name, p.kind.as_str()));
            for (key, list) in [("values", &p.values), ("domain", &p.domain), ("range", &p.range)] {
                if !list.is_empty() {
                    out.push_str(&format!(" {key} {}", list.join(",")));
                }
            }
            out.push('\n');
        }
        for e in self.lex_entries() {
            let sense = match &e.sense {
                Sense::Concept { name } => format!("concept {name}"),
                Sense::Property { name, value: Some(v) } => format!("property {name}={v}"),
                Sense::Property { name, value: None } => format!("property {name}"),
            };
            out.push_str(&format!("lex {} pos {} -> {sense} priority {}\n", e.lemma, e.pos.as_str(), e.priority));
        }
        out
    }

    /// SHA-256 of [`canonical_text`](Self::canonical_text), hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

fn reachable_roots<'a>(parents: &'a BTreeMap<String, Vec<String>>, start: &'a str) -> BTreeSet<&'a str> {
    let mut roots = BTreeSet::new();
    let mut stack = vec![start];
    let mut seen = BTreeSet::new();
    while let Some(c) = stack.pop() {
        if !seen.insert(c) {
            continue;
        }
        if c == EVENT || c == OBJECT {
            roots.insert(c);
        }
        stack.extend(parents[c].iter().map(String::as_str));
    }
    roots
}

fn find_cycle(parents: &BTreeMap<String, Vec<String>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    fn visit<'a>(
        node: &'a str,
        parents: &'a BTreeMap<String, Vec<String>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        marks.insert(node, Mark::Active);
        path.push(node);
        for p in &parents[node] {
            match marks.get(p.as_str()).copied().unwrap_or(Mark::Fresh) {
                Mark::Active => {
                    let start = path.iter().position(|n| *n == p).unwrap_or(0);
                    let mut cycle: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(p.clone());
                    return Some(cycle);
                }
                Mark::Fresh => {
                    if let Some(c) = visit(p, parents, marks, path) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        path.pop();
        marks.insert(node, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for name in parents.keys() {
        if marks.get(name.as_str()).copied().unwrap_or(Mark::Fresh) == Mark::Fresh {
            if let Some(c) = visit(name, parents, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "concept EVENT\nconcept OBJECT\n\
property AGENT kind CASE-ROLE\nproperty THEME kind CASE-ROLE\n\
property THEME-INFORMATION kind CASE-ROLE\nproperty INSTRUMENT kind CASE-ROLE\n\
property CAUSED-BY kind CAUSALITY\n";

    fn load(extra: &str) -> Result<OntologyGraph, OntologyError> {
        load_ontology(format!("{HEADER}{extra}").as_bytes())
    }

    #[test]
    fn bundled_has_golden_names() {
        let g = OntologyGraph::bundled();
        for c in ["CHEMICAL", "DRAWING", "GRAPHICAL-REPRESENTATION", "SHOW-INFORMATION"] {
            assert!(g.concept(c).is_some(), "{c}");
        }
        let linear = g.lookup_senses("linear", Pos::Adj);
        assert_eq!(linear[0].sense, Sense::property("SHAPE", Some("straight")));
    }

    #[test]
    fn cycle_is_reported() {
        let err = load("concept A is-a B\nconcept B is-a A\n").unwrap_err();
        match err {
            OntologyError::Cycle(c) => {
                assert_eq!(c.first(), c.last());
                assert!(c.contains(&"A".to_string()) && c.contains(&"B".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn integrity_errors() {
        assert!(matches!(load("concept A is-a NOPE\n"), Err(OntologyError::Integrity { .. })));
        assert!(matches!(load("concept A\n"), Err(OntologyError::Integrity { .. })));
        assert!(matches!(
            load("concept A is-a EVENT,OBJECT\n"),
            Err(OntologyError::Integrity { ref entity, .. }) if entity == "A"
        ));
        assert!(matches!(load("property S kind ATTRIBUTE domain OBJECT\n"), Err(OntologyError::Integrity { .. })));
        assert!(matches!(load("lex foo pos NOUN -> concept NOPE\n"), Err(OntologyError::Integrity { .. })));
        assert!(matches!(
            load("concept A is-a OBJECT\nlex a pos NOUN -> concept A\nlex a pos NOUN -> concept A\n"),
            Err(OntologyError::Integrity { .. })
        ));
        assert!(matches!(load("concept UNKNOWN is-a OBJECT\n"), Err(OntologyError::Integrity { .. })));
        let missing_role = "concept EVENT\nconcept OBJECT\nproperty AGENT kind CASE-ROLE\n";
        assert!(matches!(
            load_ontology(missing_role.as_bytes()),
            Err(OntologyError::Integrity { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_line() {
        assert!(matches!(load("bogus line\n"), Err(OntologyError::Syntax { line: 8, .. })));
    }

    #[test]
    fn ancestors_follow_first_parent() {
        let g = load("concept A is-a OBJECT\nconcept B is-a OBJECT\nconcept C is-a A,B\nconcept D is-a C\n").unwrap();
        assert_eq!(g.ancestors("D").unwrap(), vec!["C", "A", "OBJECT"]);
        assert!(g.ancestors("OBJECT").unwrap().is_empty());
        assert!(g.subsumed_by("D", "B"));
        assert!(matches!(g.ancestors("Z"), Err(OntologyError::UnknownConcept(_))));
    }

    #[test]
    fn table2_chain() {
        let g = OntologyGraph::bundled();
        assert_eq!(
            g.ancestors("DRAWING").unwrap(),
            vec!["GRAPHICAL-REPRESENTATION", "INFORMATION-OBJECT", "SOCIAL-OBJECT", "OBJECT"]
        );
        assert_eq!(g.ancestors("SHOW-INFORMATION").unwrap(), vec!["EVENT"]);
    }

    #[test]
    fn lookups() {
        let g = OntologyGraph::bundled();
        let show = g.lookup_senses("show", Pos::Verb);
        assert_eq!(show[0].sense, Sense::concept("SHOW-INFORMATION"));
        assert!(g.lookup_senses("zzzz", Pos::Verb).is_empty());
        let position = g.lookup_senses("position", Pos::Noun);
        assert!(matches!(&position[0].sense, Sense::Property { name, .. } if name == "GEOMETRIC-ASPECT"));
    }

    #[test]
    fn priorities_default_to_declaration_order() {
        let g = load(
            "concept A is-a OBJECT\nconcept B is-a OBJECT\nconcept C is-a OBJECT\n\
lex x pos NOUN -> concept B\nlex x pos NOUN -> concept A\nlex x pos NOUN -> concept C priority 0\n",
        )
        .unwrap();
        let names: Vec<_> = g.lookup_senses("X", Pos::Noun).iter().map(|e| e.sense.name().to_string()).collect();
        assert_eq!(names, vec!["B", "C", "A"]);
    }

    #[test]
    fn path_completion() {
        let g = OntologyGraph::bundled();
        let before = g.fingerprint();
        let path = g.complete_path("SHOW-INFORMATION", "GEOMETRIC-ASPECT", None, None).unwrap();
        let labels: Vec<&str> = path.iter().map(PathNode::label).collect();
        assert_eq!(labels, vec!["SHOW-INFORMATION", "UNKNOWN", "GEOMETRIC-ASPECT", "UNKNOWN"]);

        let path = g.complete_path("SHOW-INFORMATION", "SHAPE", Some("straight"), Some("DRAWING")).unwrap();
        assert!(path.iter().all(|n| !n.is_unknown()));

        assert!(matches!(
            g.complete_path("SHOW-INFORMATION", "AGENT", None, None),
            Err(OntologyError::Completion { .. })
        ));
        assert_eq!(g.fingerprint(), before);
        assert_eq!(g.concept_count(), OntologyGraph::bundled().concept_count());
    }

    #[test]
    fn json_mirror_matches_line_format() {
        let g = OntologyGraph::bundled();
        let file = OntologyFile {
            concepts: g
                .concepts()
                .map(|c| ConceptRecord {
                    name: c.name.clone(),
                    parents: c.parents.clone(),
                })
                .collect(),
            properties: g.properties().cloned().collect(),
            lexicon: g
                .lex_entries()
                .map(|e| LexRecord {
                    lemma: e.lemma.clone(),
                    pos: e.pos,
                    sense: e.sense.clone(),
                    priority: Some(e.priority),
                })
                .collect(),
        };
        let json = serde_json::to_string(&file).unwrap();
        let reloaded = load_ontology(json.as_bytes()).unwrap();
        assert_eq!(reloaded.fingerprint(), g.fingerprint());
    }
}
