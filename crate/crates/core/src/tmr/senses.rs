//! Choosing one sense per frame slot.
//!
//! The objective counts relations the ontology permits between the chosen
//! senses: a filled case-role slot (verb to subject, verb to object) and
//! an attribute whose domain admits the thing it modifies. Among equally
//! good assignments the one with the smallest summed priority wins, then
//! the lexicographically smallest choice vector in slot order
//! `[verb, subject, object, modifiers...]`.
//!
//! Relations only connect a slot to its head, so the frame is a tree rooted
//! at the verb. [`choose_senses`] exploits that: for each verb sense the
//! subject subtree, object subtree and verb modifiers are optimized
//! independently.

use std::cmp::Ordering;

use crate::ontology::{OntologyGraph, PropertyKind, RootCategory, Sense};

use super::{ModifierTarget, SvoFrame};

/// One lexicon sense available to a slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub sense: Sense,
    pub priority: u32,
}

/// Candidate lists in slot order: verb, subject, object, then modifiers.
pub type SlotCandidates = Vec<Vec<Candidate>>;

/// Index into each slot's candidate list; `None` when the slot is empty.
pub type SenseChoice = Vec<Option<usize>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Objective {
    pub relations: u32,
    pub priority: u64,
}

impl Objective {
    fn add(self, other: Objective) -> Objective {
        Objective {
            relations: self.relations + other.relations,
            priority: self.priority + other.priority,
        }
    }

    /// `Greater` means better: more relations, then lower priority.
    pub fn compare(&self, other: &Objective) -> Ordering {
        self.relations
            .cmp(&other.relations)
            .then_with(|| other.priority.cmp(&self.priority))
    }
}

pub(crate) const SUBJECT_ROLES: [&str; 2] = ["AGENT", "INSTRUMENT"];
pub(crate) const PASSIVE_SUBJECT_ROLES: [&str; 2] = ["THEME-INFORMATION", "THEME"];
pub(crate) const OBJECT_ROLES: [&str; 2] = ["THEME-INFORMATION", "THEME"];

pub(crate) fn subject_roles(frame: &SvoFrame) -> &'static [&'static str] {
    if frame.passive {
        &PASSIVE_SUBJECT_ROLES
    } else {
        &SUBJECT_ROLES
    }
}

/// The first role in `roles` that the ontology permits between `verb` and
/// `arg`, if any.
pub fn permitted_role(
    graph: &OntologyGraph,
    verb: Option<&Sense>,
    arg: Option<&Sense>,
    roles: &[&'static str],
) -> Option<&'static str> {
    let Some(Sense::Concept { name: event }) = verb else {
        return None;
    };
    let arg = arg?;
    roles.iter().copied().find(|role| {
        let Some(def) = graph.property(role) else {
            return false;
        };
        if def.kind != PropertyKind::CaseRole {
            return false;
        }
        if !def.domain.is_empty() && !def.domain.iter().any(|d| graph.subsumed_by(event, d)) {
            return false;
        }
        let in_range = |c: &str| def.range.is_empty() || def.range.iter().any(|r| graph.subsumed_by(c, r));
        match arg {
            Sense::Concept { name } => in_range(name),
            Sense::Property { name, .. } => graph.property(name).is_some_and(|p| {
                p.kind == PropertyKind::Attribute
                    && p.domain.iter().any(|bearer| {
                        graph
                            .concept(bearer)
                            .is_some_and(|c| c.root_category == RootCategory::Object)
                            && (def.range.is_empty() || def.range.iter().any(|r| graph.compatible(bearer, r)))
                    })
            }),
        }
    })
}

/// Whether an attribute sense may describe the target sense.
pub fn modifier_permitted(graph: &OntologyGraph, modifier: Option<&Sense>, target: Option<&Sense>) -> bool {
    let Some(Sense::Property { name, .. }) = modifier else {
        return false;
    };
    let Some(def) = graph.property(name).filter(|d| d.kind == PropertyKind::Attribute) else {
        return false;
    };
    match target {
        Some(Sense::Concept { name: c }) => def.domain.iter().any(|d| graph.subsumed_by(c, d)),
        Some(Sense::Property { name: q, .. }) => graph.property(q).is_some_and(|q| {
            q.kind == PropertyKind::Attribute
                && q.domain.iter().any(|bearer| {
                    graph
                        .concept(bearer)
                        .is_some_and(|c| c.root_category == RootCategory::Object)
                        && def.domain.iter().any(|d| graph.compatible(bearer, d))
                })
        }),
        None => false,
    }
}

fn pick(candidates: &[Candidate], choice: Option<usize>) -> Option<&Candidate> {
    choice.and_then(|i| candidates.get(i))
}

fn priority_of(c: Option<&Candidate>) -> u64 {
    c.map_or(0, |c| u64::from(c.priority))
}

/// Objective value of a full assignment.
pub fn objective(frame: &SvoFrame, graph: &OntologyGraph, candidates: &SlotCandidates, choice: &SenseChoice) -> Objective {
    let chosen: Vec<Option<&Candidate>> = candidates
        .iter()
        .zip(choice)
        .map(|(c, &i)| pick(c, i))
        .collect();
    let sense = |slot: usize| chosen[slot].map(|c| &c.sense);

    let mut relations = 0;
    if frame.subject.is_some() && permitted_role(graph, sense(0), sense(1), subject_roles(frame)).is_some() {
        relations += 1;
    }
    if frame.object.is_some() && permitted_role(graph, sense(0), sense(2), &OBJECT_ROLES).is_some() {
        relations += 1;
    }
    for (i, m) in frame.modifiers.iter().enumerate() {
        if modifier_permitted(graph, sense(3 + i), sense(m.target.slot())) {
            relations += 1;
        }
    }
    Objective {
        relations,
        priority: chosen.iter().map(|c| priority_of(*c)).sum(),
    }
}

/// Options for one slot: `None` if the slot has no candidates.
fn options(candidates: &[Candidate]) -> Vec<Option<usize>> {
    if candidates.is_empty() {
        vec![None]
    } else {
        (0..candidates.len()).map(Some).collect()
    }
}

/// Best option for a leaf modifier given its target's sense.
fn best_modifier(
    graph: &OntologyGraph,
    candidates: &[Candidate],
    target: Option<&Sense>,
) -> (Option<usize>, Objective) {
    let mut best: Option<(Option<usize>, Objective)> = None;
    for opt in options(candidates) {
        let c = pick(candidates, opt);
        let value = Objective {
            relations: u32::from(modifier_permitted(graph, c.map(|c| &c.sense), target)),
            priority: priority_of(c),
        };
        // strict improvement keeps the earliest index on ties
        if best.is_none_or(|(_, b)| value.compare(&b) == Ordering::Greater) {
            best = Some((opt, value));
        }
    }
    best.expect("options is never empty")
}

/// An argument option, the options of its modifiers by slot, and their value.
type ArgumentChoice = (Option<usize>, Vec<(usize, Option<usize>)>, Objective);

/// Best choice for an argument slot and its modifiers, given the verb sense.
fn best_argument(
    frame: &SvoFrame,
    graph: &OntologyGraph,
    candidates: &SlotCandidates,
    slot: usize,
    target: ModifierTarget,
    roles: &[&'static str],
    verb: Option<&Sense>,
) -> ArgumentChoice {
    let mut best: Option<ArgumentChoice> = None;
    for opt in options(&candidates[slot]) {
        let c = pick(&candidates[slot], opt);
        let sense = c.map(|c| &c.sense);
        let mut value = Objective {
            relations: u32::from(permitted_role(graph, verb, sense, roles).is_some()),
            priority: priority_of(c),
        };
        let mut mods = Vec::new();
        for (i, m) in frame.modifiers.iter().enumerate() {
            if m.target == target {
                let (mopt, mvalue) = best_modifier(graph, &candidates[3 + i], sense);
                value = value.add(mvalue);
                mods.push((3 + i, mopt));
            }
        }
        if best.as_ref().is_none_or(|(_, _, b)| value.compare(b) == Ordering::Greater) {
            best = Some((opt, mods, value));
        }
    }
    best.expect("options is never empty")
}

/// Optimal sense assignment for `frame` under [`objective`].
pub fn choose_senses(frame: &SvoFrame, graph: &OntologyGraph, candidates: &SlotCandidates) -> SenseChoice {
    assert_eq!(candidates.len(), 3 + frame.modifiers.len(), "one candidate list per slot");
    let mut best: Option<(SenseChoice, Objective)> = None;
    for vopt in options(&candidates[0]) {
        let vc = pick(&candidates[0], vopt);
        let verb = vc.map(|c| &c.sense);
        let mut choice: SenseChoice = vec![None; candidates.len()];
        choice[0] = vopt;
        let mut value = Objective {
            relations: 0,
            priority: priority_of(vc),
        };

        let arguments = [
            (frame.subject.is_some(), 1, ModifierTarget::Subject, subject_roles(frame)),
            (frame.object.is_some(), 2, ModifierTarget::Object, &OBJECT_ROLES[..]),
        ];
        for (present, slot, target, roles) in arguments {
            let roles = if present { roles } else { &[] };
            let (aopt, mods, avalue) = best_argument(frame, graph, candidates, slot, target, roles, verb);
            choice[slot] = aopt;
            for (s, o) in mods {
                choice[s] = o;
            }
            value = value.add(avalue);
        }
        for (i, m) in frame.modifiers.iter().enumerate() {
            if m.target == ModifierTarget::Verb {
                let (mopt, mvalue) = best_modifier(graph, &candidates[3 + i], verb);
                choice[3 + i] = mopt;
                value = value.add(mvalue);
            }
        }
        if best.as_ref().is_none_or(|(_, b)| value.compare(b) == Ordering::Greater) {
            best = Some((choice, value));
        }
    }
    best.expect("options is never empty").0
}
