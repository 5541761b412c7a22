//! Text Meaning Representation construction.
//!
//! A sentence's dependency parse is reduced to subject–verb–object frames
//! with their adjective/adverb modifiers. Each frame token is mapped to
//! lexicon senses (verbs the lexicon lacks go through synonym/embedding
//! expansion), one sense per token is chosen (see [`senses`]) and the
//! chosen senses are expanded into distance-annotated elements:
//!
//! * a concept sense contributes the concept at distance 1 and each IS-A
//!   ancestor one further, stopping before `EVENT`/`OBJECT`;
//! * a property sense contributes the property at distance 1;
//! * an attribute with no expressed bearer is hung from the verb through
//!   placeholder `UNKNOWN` nodes, which never score;
//! * each filled case role is emitted as a relation element so that the
//!   scorer can decide whether to count it (by default it does not).

mod chem;
pub mod senses;

pub use chem::{is_formula, Gazetteer, BUNDLED_GAZETTEER};
pub use senses::{choose_senses, objective, Candidate, Objective, SenseChoice, SlotCandidates};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{ParsedSentence, Token};
use crate::lexres::LexicalResources;
use crate::ontology::{OntologyGraph, PathNode, Pos, Sense, UNKNOWN};

use senses::{permitted_role, subject_roles, OBJECT_ROLES};

/// A token as seen by frame construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameToken {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    /// Tagged by the chemical gazetteer or formula pattern.
    pub chemical: bool,
}

impl FrameToken {
    pub fn new(id: usize, form: &str, lemma: &str, upos: &str) -> Self {
        FrameToken {
            id,
            form: form.into(),
            lemma: lemma.into(),
            upos: upos.into(),
            chemical: false,
        }
    }

    fn from_token(t: &Token, gazetteer: &Gazetteer) -> Self {
        FrameToken {
            id: t.id,
            form: t.form.clone(),
            lemma: t.lemma.clone(),
            upos: t.upos.clone(),
            chemical: gazetteer.is_chemical(&t.form, &t.lemma),
        }
    }

    /// Lexicon part of speech; pronouns are looked up as nouns.
    pub fn pos(&self) -> Option<Pos> {
        Pos::from_upos(&self.upos)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModifierTarget {
    Verb,
    Subject,
    Object,
}

impl ModifierTarget {
    pub fn slot(self) -> usize {
        match self {
            ModifierTarget::Verb => 0,
            ModifierTarget::Subject => 1,
            ModifierTarget::Object => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modifier {
    pub token: FrameToken,
    pub target: ModifierTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvoFrame {
    pub verb: FrameToken,
    pub subject: Option<FrameToken>,
    pub object: Option<FrameToken>,
    pub modifiers: Vec<Modifier>,
    /// Passive voice: the subject fills a theme role.
    pub passive: bool,
}

impl SvoFrame {
    pub fn modified_token(&self, modifier: &Modifier) -> Option<&FrameToken> {
        match modifier.target {
            ModifierTarget::Verb => Some(&self.verb),
            ModifierTarget::Subject => self.subject.as_ref(),
            ModifierTarget::Object => self.object.as_ref(),
        }
    }

    /// Slot tokens in the order `[verb, subject, object, modifiers...]`.
    pub fn slots(&self) -> Vec<Option<&FrameToken>> {
        let mut slots = vec![Some(&self.verb), self.subject.as_ref(), self.object.as_ref()];
        slots.extend(self.modifiers.iter().map(|m| Some(&m.token)));
        slots
    }
}

const FINITE_RELATIONS: [&str; 6] = ["root", "conj", "ccomp", "parataxis", "acl:relcl", "relcl"];
const MODIFIER_RELATIONS: [&str; 3] = ["amod", "advmod", "compound"];

fn is_subject(deprel: &str) -> bool {
    deprel.starts_with("nsubj")
}

fn is_passive_subject(deprel: &str) -> bool {
    deprel == "nsubj:pass" || deprel == "nsubjpass"
}

/// Subject–verb–object frames, one per finite verb, in token order.
pub fn extract_frames(parsed: &ParsedSentence, gazetteer: &Gazetteer) -> Vec<SvoFrame> {
    let subject_of = |id: usize| parsed.children(id).find(|c| is_subject(&c.deprel));
    let mut frames = Vec::new();
    for verb in parsed.tokens.iter().filter(|t| t.upos == "VERB") {
        let has_subject_or_aux =
            parsed.children(verb.id).any(|c| is_subject(&c.deprel) || c.deprel.starts_with("aux"));
        if !(FINITE_RELATIONS.contains(&verb.deprel.as_str()) || has_subject_or_aux) {
            continue;
        }
        let mut subject = subject_of(verb.id);
        if subject.is_none() && verb.deprel == "conj" {
            subject = parsed.token(verb.head).and_then(|h| subject_of(h.id));
        }
        let passive = subject.is_some_and(|s| is_passive_subject(&s.deprel) && s.head == verb.id)
            || parsed
                .children(verb.id)
                .any(|c| c.deprel == "aux:pass" || c.deprel == "auxpass");
        let object = parsed.children(verb.id).find(|c| c.deprel == "obj" || c.deprel == "dobj");

        let mut modifiers = Vec::new();
        let mut attach = |head: &Token, target: ModifierTarget| {
            for m in parsed.children(head.id) {
                let allowed = if target == ModifierTarget::Verb {
                    m.deprel == "advmod"
                } else {
                    MODIFIER_RELATIONS.contains(&m.deprel.as_str())
                };
                if allowed {
                    modifiers.push(Modifier {
                        token: FrameToken::from_token(m, gazetteer),
                        target,
                    });
                }
            }
        };
        attach(verb, ModifierTarget::Verb);
        if let Some(s) = subject {
            attach(s, ModifierTarget::Subject);
        }
        if let Some(o) = object {
            attach(o, ModifierTarget::Object);
        }
        modifiers.sort_by_key(|m| m.token.id);

        frames.push(SvoFrame {
            verb: FrameToken::from_token(verb, gazetteer),
            subject: subject.map(|t| FrameToken::from_token(t, gazetteer)),
            object: object.map(|t| FrameToken::from_token(t, gazetteer)),
            modifiers,
            passive,
        });
    }
    frames
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ElementKind {
    Concept,
    Property,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ElementSource {
    /// Evoked by a word of the sentence.
    Lexeme { token: usize, form: String },
    /// A case role or causal link between evoked elements.
    Relation,
    /// A sentence-scoped `UNKNOWN` node.
    Placeholder,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TmrElement {
    pub kind: ElementKind,
    pub name: String,
    pub distance: u32,
    pub source: ElementSource,
}

impl TmrElement {
    pub fn is_unknown(&self) -> bool {
        self.source == ElementSource::Placeholder
    }
}

pub type Edge = (String, String, String);

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tmr {
    pub sentence: usize,
    pub elements: Vec<TmrElement>,
    pub edges: Vec<Edge>,
    /// Tokens that had no usable sense.
    pub unmapped_tokens: Vec<usize>,
}

impl Tmr {
    pub fn empty(sentence: usize) -> Self {
        Tmr {
            sentence,
            ..Tmr::default()
        }
    }

    /// No word of the sentence mapped to any sense; such TMRs score 0.
    pub fn is_unmappable(&self) -> bool {
        !self.elements.iter().any(|e| matches!(e.source, ElementSource::Lexeme { .. }))
    }

    /// Elements that take part in scoring, before configurable exclusions:
    /// lexeme-evoked elements plus relation elements.
    pub fn scoring_elements(&self) -> impl Iterator<Item = &TmrElement> {
        self.elements.iter().filter(|e| !e.is_unknown())
    }

    pub fn relation_elements(&self) -> impl Iterator<Item = &TmrElement> {
        self.elements.iter().filter(|e| e.source == ElementSource::Relation)
    }

    /// Sorted, source-free JSON used for golden files and audit output.
    pub fn canonical_json(&self) -> serde_json::Value {
        let mut elements: Vec<(ElementKind, &str, u32)> = self
            .elements
            .iter()
            .map(|e| (e.kind, e.name.as_str(), e.distance))
            .collect();
        elements.sort();
        let mut edges = self.edges.clone();
        edges.sort();
        serde_json::json!({
            "sentence": self.sentence,
            "elements": elements
                .iter()
                .map(|(k, n, d)| serde_json::json!({"kind": k, "name": n, "distance": d}))
                .collect::<Vec<_>>(),
            "edges": edges,
        })
    }

    pub fn canonical_string(&self) -> String {
        serde_json::to_string(&self.canonical_json()).expect("TMR JSON serializes")
    }
}

/// Lexeme-evoked elements as `(kind, name, distance)`, duplicates kept.
/// Placeholders and relation elements are left out.
pub fn tmr_elements(tmr: &Tmr) -> Vec<(ElementKind, &str, u32)> {
    tmr.elements
        .iter()
        .filter(|e| matches!(e.source, ElementSource::Lexeme { .. }))
        .map(|e| (e.kind, e.name.as_str(), e.distance))
        .collect()
}

/// Shared read-only inputs for TMR construction.
#[derive(Debug, Clone, Copy)]
pub struct TmrContext<'a> {
    pub graph: &'a OntologyGraph,
    pub lexres: Option<&'a LexicalResources>,
    pub gazetteer: &'a Gazetteer,
}

impl<'a> TmrContext<'a> {
    pub fn new(graph: &'a OntologyGraph, lexres: Option<&'a LexicalResources>, gazetteer: &'a Gazetteer) -> Self {
        TmrContext {
            graph,
            lexres,
            gazetteer,
        }
    }

    /// Candidate senses for one token.
    pub fn token_candidates(&self, token: &FrameToken) -> Vec<Candidate> {
        if token.chemical && self.graph.concept("CHEMICAL").is_some() {
            return vec![Candidate {
                sense: Sense::concept("CHEMICAL"),
                priority: 0,
            }];
        }
        let Some(pos) = token.pos() else {
            return Vec::new();
        };
        let lemma = token.lemma.to_lowercase();
        let direct: Vec<Candidate> = self
            .graph
            .lookup_senses(&lemma, pos)
            .into_iter()
            .map(|e| Candidate {
                sense: e.sense,
                priority: e.priority,
            })
            .collect();
        if !direct.is_empty() || pos != Pos::Verb {
            return direct;
        }
        let Some(lexres) = self.lexres else {
            return Vec::new();
        };
        let mut out: Vec<Candidate> = Vec::new();
        for synonym in lexres.candidate_verb_lemmas(&lemma) {
            for entry in self.graph.lookup_senses(&synonym, Pos::Verb) {
                if !out.iter().any(|c| c.sense == entry.sense) {
                    let priority = out.len() as u32;
                    out.push(Candidate {
                        sense: entry.sense,
                        priority,
                    });
                }
            }
        }
        out
    }

    pub fn frame_candidates(&self, frame: &SvoFrame) -> SlotCandidates {
        frame
            .slots()
            .into_iter()
            .map(|t| t.map(|t| self.token_candidates(t)).unwrap_or_default())
            .collect()
    }

    pub fn extract_frames(&self, parsed: &ParsedSentence) -> Vec<SvoFrame> {
        extract_frames(parsed, self.gazetteer)
    }

    /// TMR of a single frame.
    pub fn build_tmr(&self, frame: &SvoFrame, sentence: usize) -> Tmr {
        let mut builder = Builder::new(self.graph, sentence);
        builder.add_frame(self, frame);
        builder.finish()
    }

    /// TMR of a whole sentence: the union of its frames' TMRs, each token
    /// contributing its elements once.
    pub fn build_sentence_tmr(&self, parsed: &ParsedSentence, sentence: usize) -> Tmr {
        let mut builder = Builder::new(self.graph, sentence);
        for frame in self.extract_frames(parsed) {
            builder.add_frame(self, &frame);
        }
        builder.finish()
    }
}

/// Convenience wrapper over [`TmrContext::build_tmr`].
pub fn build_tmr(
    frame: &SvoFrame,
    graph: &OntologyGraph,
    lexres: Option<&LexicalResources>,
    sentence: usize,
) -> Tmr {
    let gazetteer = Gazetteer::empty();
    TmrContext::new(graph, lexres, &gazetteer).build_tmr(frame, sentence)
}

struct Builder<'g> {
    graph: &'g OntologyGraph,
    tmr: Tmr,
    edges: BTreeSet<Edge>,
    unknowns: usize,
    /// Graph node each token resolved to, for tokens already emitted.
    token_nodes: BTreeMap<usize, Option<String>>,
}

impl<'g> Builder<'g> {
    fn new(graph: &'g OntologyGraph, sentence: usize) -> Self {
        Builder {
            graph,
            tmr: Tmr::empty(sentence),
            edges: BTreeSet::new(),
            unknowns: 0,
            token_nodes: BTreeMap::new(),
        }
    }

    fn finish(mut self) -> Tmr {
        self.tmr.edges = self.edges.into_iter().collect();
        self.tmr.unmapped_tokens.sort_unstable();
        self.tmr.unmapped_tokens.dedup();
        self.tmr
    }

    fn placeholder(&mut self) -> String {
        self.unknowns += 1;
        self.tmr.elements.push(TmrElement {
            kind: ElementKind::Concept,
            name: UNKNOWN.to_string(),
            distance: 1,
            source: ElementSource::Placeholder,
        });
        format!("{UNKNOWN}#{}", self.unknowns)
    }

    fn edge(&mut self, from: &str, property: &str, to: &str) {
        self.edges.insert((from.to_string(), property.to_string(), to.to_string()));
    }

    fn lexeme(token: &FrameToken) -> ElementSource {
        ElementSource::Lexeme {
            token: token.id,
            form: token.form.clone(),
        }
    }

    fn emit_concept(&mut self, token: &FrameToken, concept: &str) {
        self.tmr.elements.push(TmrElement {
            kind: ElementKind::Concept,
            name: concept.to_string(),
            distance: 1,
            source: Self::lexeme(token),
        });
        let ancestors = self.graph.ancestors(concept).unwrap_or_default();
        let mut child = concept.to_string();
        for (hop, ancestor) in ancestors.into_iter().enumerate() {
            if OntologyGraph::is_root(&ancestor) {
                break;
            }
            self.tmr.elements.push(TmrElement {
                kind: ElementKind::Concept,
                name: ancestor.clone(),
                distance: hop as u32 + 2,
                source: Self::lexeme(token),
            });
            self.edge(&child, "IS-A", &ancestor);
            child = ancestor;
        }
    }

    fn emit_property(&mut self, token: &FrameToken, property: &str) {
        self.tmr.elements.push(TmrElement {
            kind: ElementKind::Property,
            name: property.to_string(),
            distance: 1,
            source: Self::lexeme(token),
        });
    }

    fn emit_relation(&mut self, role: &str) {
        self.tmr.elements.push(TmrElement {
            kind: ElementKind::Property,
            name: role.to_string(),
            distance: 1,
            source: ElementSource::Relation,
        });
    }

    fn value_node(&mut self, value: &Option<String>) -> String {
        match value {
            Some(v) => v.clone(),
            None => self.placeholder(),
        }
    }

    /// Emits an attribute sense with no expressed bearer. Returns the
    /// bearer node, or `None` if the path cannot be completed.
    fn unbound_attribute(
        &mut self,
        token: &FrameToken,
        property: &str,
        value: &Option<String>,
        event: Option<&str>,
        role: &str,
    ) -> Option<String> {
        if let Some(event) = event {
            let path = match self.graph.complete_path(event, property, value.as_deref(), None) {
                Ok(path) => path,
                Err(err) => {
                    log::debug!("token {} ({}) unmappable: {err}", token.id, token.form);
                    return None;
                }
            };
            debug_assert!(matches!(path[1], PathNode::UnknownObject));
            self.emit_property(token, property);
            let bearer = self.placeholder();
            let value_node = self.value_node(value);
            self.edge(event, role, &bearer);
            self.edge(&bearer, property, &value_node);
            Some(bearer)
        } else {
            self.emit_property(token, property);
            let bearer = self.placeholder();
            let value_node = self.value_node(value);
            self.edge(&bearer, property, &value_node);
            Some(bearer)
        }
    }

    fn add_frame(&mut self, ctx: &TmrContext<'_>, frame: &SvoFrame) {
        let candidates = ctx.frame_candidates(frame);
        let choice = choose_senses(frame, self.graph, &candidates);
        let chosen: Vec<Option<Sense>> = candidates
            .iter()
            .zip(&choice)
            .map(|(c, i)| i.and_then(|i| c.get(i)).map(|c| c.sense.clone()))
            .collect();

        // verb
        let verb_node = self.resolve(&frame.verb, chosen[0].as_ref(), |b, t, s| match s {
            Sense::Concept { name } => {
                b.emit_concept(t, name);
                Some(name.clone())
            }
            Sense::Property { name, value } => b.unbound_attribute(t, name, value, None, "THEME"),
        });
        let verb_event = match &chosen[0] {
            Some(Sense::Concept { name }) if verb_node.is_some() => Some(name.as_str()),
            _ => None,
        };

        // arguments
        let arguments = [
            (frame.subject.as_ref(), 1, subject_roles(frame)),
            (frame.object.as_ref(), 2, &OBJECT_ROLES[..]),
        ];
        let mut arg_nodes: [Option<String>; 3] = [verb_node, None, None];
        for (token, slot, roles) in arguments {
            let Some(token) = token else { continue };
            let sense = chosen[slot].as_ref();
            let role = permitted_role(self.graph, chosen[0].as_ref(), sense, roles);
            let fallback = if slot == 1 && !frame.passive { "AGENT" } else { "THEME" };
            let edge_role = role.unwrap_or(fallback);
            let node = self.resolve(token, sense, |b, t, s| match s {
                Sense::Concept { name } => {
                    b.emit_concept(t, name);
                    Some(name.clone())
                }
                Sense::Property { name, value } => b.unbound_attribute(t, name, value, verb_event, edge_role),
            });
            if let (Some(event), Some(Sense::Concept { name }), Some(_)) = (verb_event, sense, &node) {
                self.edge(event, edge_role, name);
            }
            if node.is_some() && role.is_some() {
                self.emit_relation(edge_role);
            }
            arg_nodes[slot] = node;
        }

        // modifiers
        for (i, m) in frame.modifiers.iter().enumerate() {
            let sense = chosen[3 + i].as_ref();
            let target = arg_nodes[m.target.slot()].clone();
            self.resolve(&m.token, sense, |b, t, s| match s {
                Sense::Concept { name } => {
                    b.emit_concept(t, name);
                    Some(name.clone())
                }
                Sense::Property { name, value } => match &target {
                    Some(node) => {
                        b.emit_property(t, name);
                        let value_node = b.value_node(value);
                        b.edge(node, name, &value_node);
                        Some(node.clone())
                    }
                    None => b.unbound_attribute(t, name, value, verb_event, "THEME"),
                },
            });
        }
    }

    /// Runs `emit` for a token's chosen sense unless the token was already
    /// handled by an earlier frame of the same sentence.
    fn resolve<F>(&mut self, token: &FrameToken, sense: Option<&Sense>, emit: F) -> Option<String>
    where
        F: FnOnce(&mut Self, &FrameToken, &Sense) -> Option<String>,
    {
        if let Some(node) = self.token_nodes.get(&token.id) {
            return node.clone();
        }
        let node = match sense {
            Some(s) => emit(self, token, s),
            None => None,
        };
        if node.is_none() {
            self.tmr.unmapped_tokens.push(token.id);
        }
        self.token_nodes.insert(token.id, node.clone());
        node
    }
}
