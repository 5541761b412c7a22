//! Element weights, sentence scores and the λ threshold.
//!
//! Calibration walks the TMRs of figure-referring sentences. Every
//! occurrence of an element `e` at distance `d` adds `1/d²` to its raw
//! weight; raw weights are then normalized so that concept weights and
//! property weights each sum to one. A sentence scores
//! `Σ weight(e) / d(e)²` over its elements and is descriptive when the
//! score is strictly greater than `λ ×` the mean reference-sentence score.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tmr::{ElementKind, Tmr};

/// λ values reported for the threshold sweep.
pub const DEFAULT_LAMBDAS: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 1.5];

pub const DEFAULT_LAMBDA: f64 = 0.5;

pub const DEFAULT_EXCLUDED_CONCEPTS: [&str; 2] = ["EVENT", "OBJECT"];

pub const DEFAULT_EXCLUDED_PROPERTIES: [&str; 6] =
    ["AGENT", "THEME", "THEME-INFORMATION", "INSTRUMENT", "CAUSED-BY", "IS-A"];

/// Tolerance for the per-category weight sums.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("calibration needs at least one reference TMR")]
    EmptyCalibration,
    #[error("every element of the reference TMRs is excluded")]
    Degenerate,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("alignment error: {0}")]
    Alignment(String),
    #[error("invalid weight table: {0}")]
    Table(String),
    #[error("weight table JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    pub lambda: f64,
    pub excluded_concepts: BTreeSet<String>,
    pub excluded_properties: BTreeSet<String>,
    pub window: usize,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            lambda: DEFAULT_LAMBDA,
            excluded_concepts: DEFAULT_EXCLUDED_CONCEPTS.iter().map(|s| s.to_string()).collect(),
            excluded_properties: DEFAULT_EXCLUDED_PROPERTIES.iter().map(|s| s.to_string()).collect(),
            window: crate::figref::DEFAULT_WINDOW,
        }
    }
}

impl ScoringConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        ScoringConfig {
            lambda,
            ..ScoringConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        check_lambda(self.lambda)
    }

    pub fn is_excluded(&self, kind: ElementKind, name: &str) -> bool {
        match kind {
            ElementKind::Concept => self.excluded_concepts.contains(name),
            ElementKind::Property => self.excluded_properties.contains(name),
        }
    }
}

fn check_lambda(lambda: f64) -> Result<(), ScoringError> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(ScoringError::Config(format!("lambda must be positive and finite, got {lambda}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CalibrationCounts {
    pub num_tmrs: usize,
    pub num_concepts: usize,
    pub num_properties: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightTable {
    pub concepts: BTreeMap<String, f64>,
    pub properties: BTreeMap<String, f64>,
    pub mean_ref_weight: f64,
    pub counts: CalibrationCounts,
}

fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

impl WeightTable {
    /// A table from explicit weights, e.g. hand-set initial weights.
    /// Sums are not checked; use [`WeightTable::validate`] for that.
    pub fn new<C, P>(concepts: C, properties: P, mean_ref_weight: f64) -> Self
    where
        C: IntoIterator<Item = (String, f64)>,
        P: IntoIterator<Item = (String, f64)>,
    {
        let concepts: BTreeMap<_, _> = concepts.into_iter().collect();
        let properties: BTreeMap<_, _> = properties.into_iter().collect();
        let counts = CalibrationCounts {
            num_tmrs: 0,
            num_concepts: concepts.len(),
            num_properties: properties.len(),
        };
        WeightTable {
            concepts,
            properties,
            mean_ref_weight,
            counts,
        }
    }

    pub fn weight(&self, kind: ElementKind, name: &str) -> f64 {
        let map = match kind {
            ElementKind::Concept => &self.concepts,
            ElementKind::Property => &self.properties,
        };
        map.get(name).copied().unwrap_or(0.0)
    }

    /// Checks ranges, per-category sums and the exclusion lists.
    pub fn validate(&self, config: &ScoringConfig) -> Result<(), ScoringError> {
        for (kind, map) in [(ElementKind::Concept, &self.concepts), (ElementKind::Property, &self.properties)] {
            for (name, w) in map {
                if !(0.0..=1.0).contains(w) {
                    return Err(ScoringError::Table(format!("weight of {name} is {w}")));
                }
                if config.is_excluded(kind, name) {
                    return Err(ScoringError::Table(format!("excluded element {name} has a weight")));
                }
            }
            if !map.is_empty() {
                let sum: f64 = map.values().sum();
                if (sum - 1.0).abs() > 1e-6 {
                    return Err(ScoringError::Table(format!("{kind:?} weights sum to {sum}")));
                }
            }
        }
        if !(self.mean_ref_weight.is_finite() && self.mean_ref_weight >= 0.0) {
            return Err(ScoringError::Table(format!("mean_ref_weight is {}", self.mean_ref_weight)));
        }
        Ok(())
    }

    /// Persisted form with 12 significant digits and sorted keys.
    pub fn to_json(&self) -> String {
        let round = |m: &BTreeMap<String, f64>| -> BTreeMap<String, f64> {
            m.iter().map(|(k, v)| (k.clone(), round_sig(*v, 12))).collect()
        };
        let rounded = WeightTable {
            concepts: round(&self.concepts),
            properties: round(&self.properties),
            mean_ref_weight: round_sig(self.mean_ref_weight, 12),
            counts: self.counts,
        };
        let mut s = serde_json::to_string_pretty(&rounded).expect("weight table serializes");
        s.push('\n');
        s
    }

    pub fn from_json(bytes: &[u8]) -> Result<WeightTable, ScoringError> {
        Ok(serde_json::from_slice(bytes)?)
    }
}

/// Fits element weights to the reference TMRs.
pub fn calibrate(ref_tmrs: &[Tmr], config: &ScoringConfig) -> Result<WeightTable, ScoringError> {
    if ref_tmrs.is_empty() {
        return Err(ScoringError::EmptyCalibration);
    }
    // occurrences per (element, distance); summing these in key order keeps
    // the result independent of the TMR order
    let mut occurrences: BTreeMap<(ElementKind, &str, u32), u64> = BTreeMap::new();
    for tmr in ref_tmrs {
        for e in tmr.scoring_elements() {
            if !config.is_excluded(e.kind, &e.name) {
                *occurrences.entry((e.kind, e.name.as_str(), e.distance)).or_default() += 1;
            }
        }
    }
    let mut raw: [BTreeMap<String, f64>; 2] = Default::default();
    for ((kind, name, d), n) in occurrences {
        let slot = match kind {
            ElementKind::Concept => 0,
            ElementKind::Property => 1,
        };
        *raw[slot].entry(name.to_string()).or_default() += n as f64 / f64::from(d * d);
    }
    if raw.iter().all(BTreeMap::is_empty) {
        return Err(ScoringError::Degenerate);
    }
    let [concepts, properties] = raw.map(|m| {
        let alpha = 1.0 / m.values().sum::<f64>();
        m.into_iter().map(|(k, v)| (k, v * alpha)).collect::<BTreeMap<_, _>>()
    });

    let mut table = WeightTable {
        counts: CalibrationCounts {
            num_tmrs: ref_tmrs.len(),
            num_concepts: concepts.len(),
            num_properties: properties.len(),
        },
        concepts,
        properties,
        mean_ref_weight: 0.0,
    };
    let mut weights: Vec<f64> = ref_tmrs.iter().map(|t| sentence_weight(t, &table, config)).collect();
    weights.sort_by(f64::total_cmp);
    table.mean_ref_weight = weights.iter().sum::<f64>() / weights.len() as f64;
    Ok(table)
}

/// Per-element contributions `weight / d²`, in element order.
pub fn contributions<'a>(tmr: &'a Tmr, table: &WeightTable, config: &ScoringConfig) -> Vec<(&'a str, u32, f64)> {
    tmr.scoring_elements()
        .filter(|e| !config.is_excluded(e.kind, &e.name))
        .map(|e| {
            let d = f64::from(e.distance);
            (e.name.as_str(), e.distance, table.weight(e.kind, &e.name) / (d * d))
        })
        .collect()
}

pub fn sentence_weight(tmr: &Tmr, table: &WeightTable, config: &ScoringConfig) -> f64 {
    contributions(tmr, table, config).iter().fold(0.0, |acc, c| acc + c.2)
}

pub fn compute_threshold(mean_ref_weight: f64, lambda: f64) -> Result<f64, ScoringError> {
    check_lambda(lambda)?;
    Ok(lambda * mean_ref_weight)
}

/// Strictly greater than the threshold.
pub fn classify(score: f64, threshold: f64) -> bool {
    score > threshold
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub global_index: usize,
    pub weight: f64,
    pub is_descriptive: bool,
    pub threshold_used: f64,
}

impl SentenceScore {
    pub fn new(global_index: usize, weight: f64, threshold: f64) -> Self {
        SentenceScore {
            global_index,
            weight,
            is_descriptive: classify(weight, threshold),
            threshold_used: threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Metrics {
    pub fn from_counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Metrics {
            tp,
            fp,
            tn,
            fn_,
            accuracy: ratio(tp + tn, tp + fp + tn + fn_),
            precision,
            recall,
            f1,
        }
    }
}

pub fn evaluate(predictions: &[bool], gold: &[bool]) -> Result<Metrics, ScoringError> {
    if predictions.len() != gold.len() {
        return Err(ScoringError::Alignment(format!(
            "{} predictions for {} gold labels",
            predictions.len(),
            gold.len()
        )));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&p, &g) in predictions.iter().zip(gold) {
        match (p, g) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    Ok(Metrics::from_counts(tp, fp, tn, fn_))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub threshold: f64,
    pub accuracy: f64,
    pub f1: f64,
}

pub fn lambda_sweep(
    scores: &[f64],
    mean_ref_weight: f64,
    lambdas: &[f64],
    gold: &[bool],
) -> Result<Vec<SweepRow>, ScoringError> {
    lambdas
        .iter()
        .map(|&lambda| {
            let threshold = compute_threshold(mean_ref_weight, lambda)?;
            let predictions: Vec<bool> = scores.iter().map(|&s| classify(s, threshold)).collect();
            let m = evaluate(&predictions, gold)?;
            Ok(SweepRow {
                lambda,
                threshold,
                accuracy: m.accuracy,
                f1: m.f1,
            })
        })
        .collect()
}

pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("lambda\tthreshold\taccuracy\tf1\n");
    for r in rows {
        out.push_str(&format!("{}\t{:.4}\t{:.4}\t{:.4}\n", r.lambda, r.threshold, r.accuracy, r.f1));
    }
    out
}

/// Share of figure-referring sentences scoring above the threshold. These
/// sentences are all positives, so this is their recall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionRow {
    pub lambda: f64,
    pub threshold: f64,
    pub detection_rate: f64,
}

pub fn detection_sweep(ref_scores: &[f64], mean_ref_weight: f64, lambdas: &[f64]) -> Result<Vec<DetectionRow>, ScoringError> {
    lambdas
        .iter()
        .map(|&lambda| {
            let threshold = compute_threshold(mean_ref_weight, lambda)?;
            let hits = ref_scores.iter().filter(|&&s| classify(s, threshold)).count();
            Ok(DetectionRow {
                lambda,
                threshold,
                detection_rate: ratio(hits, ref_scores.len()),
            })
        })
        .collect()
}

pub fn detection_tsv(rows: &[DetectionRow]) -> String {
    let mut out = String::from("lambda\tthreshold\tdetection_rate\n");
    for r in rows {
        out.push_str(&format!("{}\t{:.4}\t{:.4}\n", r.lambda, r.threshold, r.detection_rate));
    }
    out
}
