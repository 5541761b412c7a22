//! Bag-of-words logistic regression with k-fold cross-validation.
//!
//! Features are binary presence indicators over lowercase alphabetic
//! tokens. The model minimizes mean logistic loss plus `l2/2 · ‖w‖²` by
//! full-batch gradient descent from a small seeded random start.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scoring::{evaluate, Metrics};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("training set is empty")]
    Empty,
    #[error("{features} feature rows for {labels} labels")]
    LengthMismatch { features: usize, labels: usize },
    #[error("loss diverged at epoch {epoch}")]
    Divergence { epoch: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Lowercase alphabetic tokens.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BowVocab {
    index: BTreeMap<String, usize>,
}

impl BowVocab {
    /// Tokens seen at least `min_freq` times, indexed alphabetically.
    pub fn build<'a, I>(texts: I, min_freq: usize) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for text in texts {
            for t in tokenize(text) {
                *counts.entry(t).or_default() += 1;
            }
        }
        let index = counts
            .into_iter()
            .filter(|(_, n)| *n >= min_freq.max(1))
            .map(|(t, _)| t)
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        BowVocab { index }
    }

    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut index = BTreeMap::new();
        for t in tokens {
            let next = index.len();
            index.entry(t.into()).or_insert(next);
        }
        BowVocab { index }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }
}

/// Sorted indices of the vocabulary tokens present in `text`.
pub fn featurize(text: &str, vocab: &BowVocab) -> Vec<usize> {
    let mut x: Vec<usize> = tokenize(text).filter_map(|t| vocab.get(&t)).collect();
    x.sort_unstable();
    x.dedup();
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegHyperparams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
    pub init_scale: f64,
}

impl Default for LogRegHyperparams {
    fn default() -> Self {
        LogRegHyperparams {
            learning_rate: 0.5,
            epochs: 300,
            l2: 1e-3,
            seed: 42,
            init_scale: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyperparams: LogRegHyperparams,
}

fn margin(weights: &[f64], bias: f64, x: &[usize]) -> f64 {
    bias + x.iter().map(|&i| weights[i]).sum::<f64>()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LogRegModel {
    pub fn predict_proba(&self, x: &[usize]) -> f64 {
        sigmoid(margin(&self.weights, self.bias, x))
    }

    pub fn predict(&self, x: &[usize]) -> bool {
        self.predict_proba(x) >= 0.5
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Loss and its gradient `(loss, ∂w, ∂b)` at the given parameters.
pub fn loss_and_gradient(weights: &[f64], bias: f64, xs: &[Vec<usize>], ys: &[bool], l2: f64) -> (f64, Vec<f64>, f64) {
    let n = xs.len() as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let z = margin(weights, bias, x);
        // -log σ(z) for y = 1, -log(1 - σ(z)) for y = 0
        loss += if y { softplus(-z) } else { softplus(z) };
        let residual = sigmoid(z) - if y { 1.0 } else { 0.0 };
        for &i in x {
            grad[i] += residual / n;
        }
        grad_b += residual / n;
    }
    loss /= n;
    loss += 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    for (g, w) in grad.iter_mut().zip(weights) {
        *g += l2 * w;
    }
    (loss, grad, grad_b)
}

/// Seeded initial parameters.
pub fn initial_parameters(dim: usize, hp: &LogRegHyperparams) -> (Vec<f64>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let weights = (0..dim).map(|_| rng.gen_range(-hp.init_scale..=hp.init_scale)).collect();
    (weights, 0.0)
}

pub fn train_logreg(xs: &[Vec<usize>], ys: &[bool], dim: usize, hp: &LogRegHyperparams) -> Result<LogRegModel, BaselineError> {
    if xs.len() != ys.len() {
        return Err(BaselineError::LengthMismatch {
            features: xs.len(),
            labels: ys.len(),
        });
    }
    if xs.is_empty() {
        return Err(BaselineError::Empty);
    }
    if !(hp.learning_rate > 0.0 && hp.l2 >= 0.0) {
        return Err(BaselineError::Config("learning rate must be positive and l2 nonnegative".into()));
    }
    let (mut weights, mut bias) = initial_parameters(dim, hp);
    for epoch in 0..hp.epochs {
        let (loss, grad, grad_b) = loss_and_gradient(&weights, bias, xs, ys, hp.l2);
        if !loss.is_finite() {
            return Err(BaselineError::Divergence { epoch });
        }
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= hp.learning_rate * g;
        }
        bias -= hp.learning_rate * grad_b;
    }
    if !(bias.is_finite() && weights.iter().all(|w| w.is_finite())) {
        return Err(BaselineError::Divergence { epoch: hp.epochs });
    }
    Ok(LogRegModel {
        weights,
        bias,
        hyperparams: *hp,
    })
}

/// Test-fold indices: a seeded shuffle cut into `k` near-equal runs.
pub fn fold_assignments(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>, BaselineError> {
    if k < 2 || k > n {
        return Err(BaselineError::Config(format!("k={k} folds for {n} items")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok((0..k).map(|i| order[i * n / k..(i + 1) * n / k].to_vec()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledItem {
    pub text: String,
    pub label: u8,
    #[serde(default)]
    pub source: String,
}

pub fn load_labeled_jsonl(text: &str) -> Result<Vec<LabeledItem>, BaselineError> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let item: LabeledItem = serde_json::from_str(line).map_err(|e| BaselineError::Format {
            line: i + 1,
            message: e.to_string(),
        })?;
        if item.label > 1 {
            return Err(BaselineError::Format {
                line: i + 1,
                message: format!("label must be 0 or 1, got {}", item.label),
            });
        }
        items.push(item);
    }
    Ok(items)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub vocab_size: usize,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldReport>,
    pub mean_accuracy: f64,
    pub mean_f1: f64,
}

/// k-fold cross-validation; each fold builds its vocabulary from its own
/// training part.
pub fn kfold_cv(items: &[LabeledItem], k: usize, seed: u64, hp: &LogRegHyperparams) -> Result<CvReport, BaselineError> {
    let folds = fold_assignments(items.len(), k, seed)?;
    let mut in_test = vec![usize::MAX; items.len()];
    for (f, idx) in folds.iter().enumerate() {
        for &i in idx {
            in_test[i] = f;
        }
    }
    let reports: Result<Vec<FoldReport>, BaselineError> = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let train: Vec<&LabeledItem> = items.iter().zip(&in_test).filter(|(_, &t)| t != f).map(|(it, _)| it).collect();
            let vocab = BowVocab::build(train.iter().map(|it| it.text.as_str()), 1);
            let xs: Vec<Vec<usize>> = train.iter().map(|it| featurize(&it.text, &vocab)).collect();
            let ys: Vec<bool> = train.iter().map(|it| it.label == 1).collect();
            let model = train_logreg(&xs, &ys, vocab.len(), hp)?;
            let predictions: Vec<bool> = test.iter().map(|&i| model.predict(&featurize(&items[i].text, &vocab))).collect();
            let gold: Vec<bool> = test.iter().map(|&i| items[i].label == 1).collect();
            let metrics = evaluate(&predictions, &gold).expect("aligned by construction");
            Ok(FoldReport {
                fold: f,
                train_size: train.len(),
                test_size: test.len(),
                vocab_size: vocab.len(),
                metrics,
            })
        })
        .collect();
    let folds = reports?;
    let mean = |f: fn(&FoldReport) -> f64| folds.iter().map(f).sum::<f64>() / folds.len() as f64;
    Ok(CvReport {
        k,
        seed,
        mean_accuracy: mean(|r| r.metrics.accuracy),
        mean_f1: mean(|r| r.metrics.f1),
        folds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn featurize_examples() {
        let vocab = BowVocab::from_tokens(["line", "rises"]);
        assert_eq!(featurize("the line rises", &vocab), [0, 1]);
        assert!(featurize("nothing here", &vocab).is_empty());
        assert_eq!(featurize("line line LINE rises", &vocab), [0, 1]);
    }

    #[test]
    fn vocab_min_freq() {
        let v = BowVocab::build(["a b b", "c b"], 2);
        assert_eq!(v.len(), 1);
        assert_eq!(v.get("b"), Some(0));
    }

    #[test]
    fn separable_toy_set() {
        let xs = vec![vec![0], vec![0, 1], vec![2], vec![2, 3]];
        let ys = vec![true, true, false, false];
        let m = train_logreg(&xs, &ys, 4, &LogRegHyperparams::default()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(m.predict(x), *y);
        }
    }

    #[test]
    fn constant_labels() {
        let xs = vec![vec![0], vec![1], vec![0, 1]];
        let m = train_logreg(&xs, &[false; 3], 2, &LogRegHyperparams::default()).unwrap();
        assert!(xs.iter().all(|x| !m.predict(x)));
        assert!(!m.predict(&[]));
    }

    #[test]
    fn loss_decreases() {
        let xs = vec![vec![0, 1], vec![1, 2], vec![2], vec![0]];
        let ys = vec![true, false, false, true];
        let hp = LogRegHyperparams::default();
        let (mut w, mut b) = initial_parameters(3, &hp);
        let mut last = f64::INFINITY;
        for _ in 0..100 {
            let (loss, g, gb) = loss_and_gradient(&w, b, &xs, &ys, hp.l2);
            assert!(loss <= last + 1e-12);
            last = loss;
            w.iter_mut().zip(&g).for_each(|(w, g)| *w -= 0.1 * g);
            b -= 0.1 * gb;
        }
    }

    #[test]
    fn divergence_reported() {
        let hp = LogRegHyperparams {
            learning_rate: f64::MAX,
            ..LogRegHyperparams::default()
        };
        let err = train_logreg(&[vec![0], vec![0]], &[true, false], 1, &hp).unwrap_err();
        assert!(matches!(err, BaselineError::Divergence { .. }));
    }

    #[test]
    fn folds_cover_once() {
        let folds = fold_assignments(23, 5, 7).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        assert_eq!(folds, fold_assignments(23, 5, 7).unwrap());
        assert!(fold_assignments(3, 4, 0).is_err());
        assert!(fold_assignments(3, 1, 0).is_err());
    }

    #[test]
    fn stronger_l2_shrinks_weights() {
        let xs = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let ys = vec![true, false, false, true];
        let norm = |l2| {
            let hp = LogRegHyperparams {
                l2,
                epochs: 3000,
                ..LogRegHyperparams::default()
            };
            train_logreg(&xs, &ys, 4, &hp).unwrap().weight_norm()
        };
        let norms: Vec<f64> = [0.001, 0.01, 0.1, 1.0].into_iter().map(norm).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]), "{norms:?}");
    }

    #[test]
    fn labeled_jsonl() {
        let items = load_labeled_jsonl("{\"text\":\"a\",\"label\":1,\"source\":\"x\"}\n\n{\"text\":\"b\",\"label\":0}\n").unwrap();
        assert_eq!(items.len(), 2);
        assert!(matches!(load_labeled_jsonl("{\"text\":\"a\",\"label\":2}"), Err(BaselineError::Format { line: 1, .. })));
    }
}
