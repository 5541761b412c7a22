//! File-to-file pipeline stages behind the command-line tool.
//!
//! Every stage reads inputs from disk and writes its artifacts into the
//! output directory. JSONL artifacts start with a provenance line carrying
//! input hashes and the configuration; there are no timestamps, so two runs
//! over the same inputs produce identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::baseline::{self, CvReport, LogRegHyperparams};
use crate::corpus::{self, Article, Segmenter, Sentence};
use crate::figref::{FigRefDetector, ReferenceSentence, DEFAULT_WINDOW};
use crate::lexres::{self, LexicalResources};
use crate::ontology::{self, OntologyGraph};
use crate::scoring::{self, ScoringConfig, WeightTable, DEFAULT_LAMBDAS};
use crate::tmr::{Gazetteer, Tmr, TmrContext};

pub const DETECT_FILE: &str = "detect.jsonl";
pub const WEIGHTS_FILE: &str = "weights.json";
pub const CALIBRATION_FILE: &str = "calibration.json";
pub const DETECTION_SWEEP_FILE: &str = "detection.tsv";
pub const SCORES_FILE: &str = "scores.jsonl";
pub const SWEEP_FILE: &str = "sweep.tsv";
pub const METRICS_FILE: &str = "metrics.json";
pub const BASELINE_FILE: &str = "baseline.json";
pub const COMPARISON_FILE: &str = "comparison.tsv";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl PipelineError {
    /// Process exit status: 1 usage/config, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::Data(_) => 2,
            PipelineError::Internal(_) => 3,
        }
    }
}

impl From<scoring::ScoringError> for PipelineError {
    fn from(e: scoring::ScoringError) -> Self {
        match e {
            scoring::ScoringError::Config(_) => PipelineError::Config(e.to_string()),
            _ => PipelineError::Data(e.to_string()),
        }
    }
}

impl From<baseline::BaselineError> for PipelineError {
    fn from(e: baseline::BaselineError) -> Self {
        match e {
            baseline::BaselineError::Config(_) => PipelineError::Config(e.to_string()),
            _ => PipelineError::Data(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, PipelineError> {
    fs::read(path).map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Values as read from a TOML configuration file; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub corpus: Option<PathBuf>,
    pub ontology: Option<PathBuf>,
    pub synsets: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub lambda: Option<f64>,
    pub window: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub scores: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub labeled: Option<PathBuf>,
    pub folds: Option<usize>,
    pub lambdas: Option<Vec<f64>>,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(format!("config file: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub ontology: Option<PathBuf>,
    pub synsets: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub lambda: f64,
    pub window: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub seed: u64,
    #[serde(skip)]
    pub jobs: usize,
    pub scores: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub labeled: Option<PathBuf>,
    pub folds: usize,
    pub lambdas: Vec<f64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: None,
            ontology: None,
            synsets: None,
            embeddings: None,
            gazetteer: None,
            weights: None,
            lambda: scoring::DEFAULT_LAMBDA,
            window: DEFAULT_WINDOW,
            out: PathBuf::from("out"),
            seed: 42,
            jobs: 0,
            scores: None,
            gold: None,
            labeled: None,
            folds: 10,
            lambdas: DEFAULT_LAMBDAS.to_vec(),
        }
    }
}

impl PipelineConfig {
    /// Fills unset fields from a configuration file.
    pub fn apply_file(&mut self, file: ConfigFile, explicit: &BTreeSet<&str>) {
        macro_rules! fill {
            ($($field:ident),*) => {$(
                if !explicit.contains(stringify!($field)) {
                    if let Some(v) = file.$field {
                        self.$field = v.into();
                    }
                }
            )*};
        }
        fill!(corpus, ontology, synsets, embeddings, gazetteer, weights, scores, gold, labeled);
        fill!(lambda, window, out, seed, jobs, folds, lambdas);
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let paths = [
            ("corpus", &self.corpus),
            ("ontology", &self.ontology),
            ("synsets", &self.synsets),
            ("embeddings", &self.embeddings),
            ("gazetteer", &self.gazetteer),
            ("weights", &self.weights),
            ("scores", &self.scores),
            ("gold", &self.gold),
            ("labeled", &self.labeled),
        ];
        for (name, path) in paths {
            if let Some(p) = path {
                if !p.exists() {
                    return Err(PipelineError::Config(format!("--{name} {} does not exist", p.display())));
                }
            }
        }
        if self.embeddings.is_some() && self.synsets.is_none() {
            return Err(PipelineError::Config("--embeddings needs --synsets".into()));
        }
        ScoringConfig::with_lambda(self.lambda).validate()?;
        for &l in &self.lambdas {
            ScoringConfig::with_lambda(l).validate()?;
        }
        Ok(())
    }

    pub fn scoring(&self) -> ScoringConfig {
        ScoringConfig {
            lambda: self.lambda,
            window: self.window,
            ..ScoringConfig::default()
        }
    }

    fn require<'a>(&self, path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, PipelineError> {
        path.as_deref()
            .ok_or_else(|| PipelineError::Config(format!("--{flag} is required for this command")))
    }

    fn out_file(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn prepare_out(&self) -> Result<(), PipelineError> {
        fs::create_dir_all(&self.out).map_err(|e| PipelineError::Data(format!("{}: {e}", self.out.display())))
    }

    /// Runs `f` on a worker pool of `jobs` threads (0: one per core).
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R, PipelineError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| PipelineError::Internal(format!("worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// Loaded and validated knowledge resources.
#[derive(Debug)]
pub struct Resources {
    pub graph: OntologyGraph,
    pub lexres: Option<LexicalResources>,
    pub gazetteer: Gazetteer,
    /// Input name to sha256, for provenance.
    pub hashes: BTreeMap<String, String>,
}

impl Resources {
    pub fn bundled() -> Self {
        Resources {
            graph: OntologyGraph::bundled(),
            lexres: None,
            gazetteer: Gazetteer::default(),
            hashes: BTreeMap::new(),
        }
    }

    pub fn load(cfg: &PipelineConfig) -> Result<Self, PipelineError> {
        let mut hashes = BTreeMap::new();
        let graph = match &cfg.ontology {
            Some(p) => {
                let bytes = read(p)?;
                hashes.insert("ontology".to_string(), sha256_hex(&bytes));
                ontology::load_ontology(&bytes).map_err(|e| PipelineError::Data(format!("{}: {e}", p.display())))?
            }
            None => OntologyGraph::bundled(),
        };
        let lexres = match &cfg.synsets {
            Some(p) => {
                let bytes = read(p)?;
                hashes.insert("synsets".to_string(), sha256_hex(&bytes));
                let synsets = lexres::load_synsets(&bytes).map_err(|e| PipelineError::Data(format!("{}: {e}", p.display())))?;
                let embeddings = match &cfg.embeddings {
                    Some(p) => {
                        let bytes = read(p)?;
                        hashes.insert("embeddings".to_string(), sha256_hex(&bytes));
                        Some(lexres::load_embeddings(&bytes).map_err(|e| PipelineError::Data(format!("{}: {e}", p.display())))?)
                    }
                    None => None,
                };
                Some(LexicalResources::new(synsets, embeddings))
            }
            None => None,
        };
        let gazetteer = match &cfg.gazetteer {
            Some(p) => {
                let bytes = read(p)?;
                hashes.insert("gazetteer".to_string(), sha256_hex(&bytes));
                Gazetteer::from_text(&String::from_utf8_lossy(&bytes))
            }
            None => Gazetteer::default(),
        };
        hashes.insert("ontology_fingerprint".to_string(), graph.fingerprint());
        Ok(Resources {
            graph,
            lexres,
            gazetteer,
            hashes,
        })
    }

    pub fn context(&self) -> TmrContext<'_> {
        TmrContext::new(&self.graph, self.lexres.as_ref(), &self.gazetteer)
    }
}

/// TMR of a corpus sentence; sentences without a parse get an empty TMR.
pub fn sentence_tmr(ctx: &TmrContext<'_>, sentence: &Sentence) -> Tmr {
    match &sentence.parse {
        Some(parsed) => ctx.build_sentence_tmr(parsed, sentence.global_index),
        None => Tmr::empty(sentence.global_index),
    }
}

#[derive(Debug, Clone)]
pub struct LoadedArticle {
    pub file: String,
    pub sha256: String,
    pub article: Article,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileError {
    pub file: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub articles: Vec<LoadedArticle>,
    pub errors: Vec<FileError>,
}

impl LoadedCorpus {
    pub fn hashes(&self) -> BTreeMap<String, String> {
        self.articles.iter().map(|a| (a.file.clone(), a.sha256.clone())).collect()
    }
}

fn load_one(path: &Path, segmenter: &Segmenter) -> Result<LoadedArticle, String> {
    let bytes = fs::read(path).map_err(|e| e.to_string())?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let is_xml = path.extension().is_some_and(|e| e == "xml");
    let mut article = if is_xml {
        corpus::load_article_xml_with(&bytes, segmenter)
    } else {
        corpus::load_article_json_with(&bytes, segmenter)
    }
    .map_err(|e| e.to_string())?;
    let sidecar = path.with_extension("conllu");
    if sidecar.exists() {
        let text = fs::read_to_string(&sidecar).map_err(|e| format!("{}: {e}", sidecar.display()))?;
        hasher.update(text.as_bytes());
        let blocks = corpus::parse_conllu(&text).map_err(|e| format!("{}: {e}", sidecar.display()))?;
        article = corpus::attach_parses(article, &blocks).map_err(|e| format!("{}: {e}", sidecar.display()))?;
    } else {
        log::debug!("{}: no parse sidecar", path.display());
    }
    Ok(LoadedArticle {
        file: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        sha256: hex::encode(hasher.finalize()),
        article,
    })
}

/// Loads every `*.json` / `*.xml` article of `dir` with its optional
/// `<stem>.conllu` parse. Unreadable files are reported, not fatal.
/// Articles come back ordered by uid, then file name.
pub fn load_corpus_dir(dir: &Path, segmenter: &Segmenter) -> Result<LoadedCorpus, PipelineError> {
    let entries = fs::read_dir(dir).map_err(|e| PipelineError::Data(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json" || e == "xml"))
        .collect();
    files.sort();
    let results: Vec<Result<LoadedArticle, FileError>> = files
        .par_iter()
        .map(|p| {
            load_one(p, segmenter).map_err(|message| FileError {
                file: p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
                message,
            })
        })
        .collect();
    let mut loaded = LoadedCorpus::default();
    for r in results {
        match r {
            Ok(a) => loaded.articles.push(a),
            Err(e) => {
                log::error!("{}: {}", e.file, e.message);
                loaded.errors.push(e);
            }
        }
    }
    loaded.articles.sort_by(|a, b| (&a.article.uid, &a.file).cmp(&(&b.article.uid, &b.file)));
    let unparsed = loaded
        .articles
        .iter()
        .filter(|a| a.article.sentences().next().is_some_and(|s| s.parse.is_none()))
        .count();
    if unparsed > 0 {
        log::warn!("{unparsed} article(s) have no parse sidecar; their sentences get empty TMRs");
    }
    Ok(loaded)
}

fn provenance(command: &str, cfg: &PipelineConfig, inputs: BTreeMap<String, String>, extra: Value) -> Value {
    json!({
        "provenance": {
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": cfg,
            "inputs": inputs,
            "extra": extra,
        }
    })
}

fn jsonl(lines: impl IntoIterator<Item = Value>) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

fn load_corpus(cfg: &PipelineConfig) -> Result<LoadedCorpus, PipelineError> {
    let dir = cfg.require(&cfg.corpus, "corpus")?;
    cfg.install(|| load_corpus_dir(dir, &Segmenter::default()))?
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DetectSummary {
    pub articles: usize,
    pub sentences: usize,
    pub reference_sentences: usize,
    pub candidates: usize,
    pub errors: Vec<FileError>,
}

fn scan(corpus: &LoadedCorpus, detector: &FigRefDetector, window: usize) -> Vec<Vec<ReferenceSentence>> {
    corpus
        .articles
        .par_iter()
        .map(|a| detector.scan_article(&a.article, window))
        .collect()
}

/// Writes one line per figure-referring sentence with its candidate set.
pub fn cmd_detect(cfg: &PipelineConfig) -> Result<DetectSummary, PipelineError> {
    cfg.validate()?;
    let corpus = load_corpus(cfg)?;
    let detector = FigRefDetector::default();
    let scans = cfg.install(|| scan(&corpus, &detector, cfg.window))?;
    let mut summary = DetectSummary {
        articles: corpus.articles.len(),
        errors: corpus.errors.clone(),
        ..DetectSummary::default()
    };
    let mut lines = vec![provenance("detect", cfg, corpus.hashes(), json!({"errors": corpus.errors}))];
    for (a, refs) in corpus.articles.iter().zip(&scans) {
        summary.sentences += a.article.sentence_count();
        summary.reference_sentences += refs.len();
        summary.candidates += refs
            .iter()
            .flat_map(|r| r.candidates.neighbor_indices.iter().copied())
            .collect::<BTreeSet<usize>>()
            .len();
        for r in refs {
            lines.push(json!({
                "uid": a.article.uid,
                "file": a.file,
                "matches": r.matches,
                "candidates": r.candidates,
            }));
        }
    }
    cfg.prepare_out()?;
    write(&cfg.out_file(DETECT_FILE), &jsonl(lines))?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationSummary {
    pub articles: usize,
    pub reference_sentences: usize,
    pub unmappable_reference_sentences: usize,
    pub num_tmrs: usize,
    pub num_concepts: usize,
    pub num_properties: usize,
    pub mean_ref_weight: f64,
    pub errors: Vec<FileError>,
}

/// TMRs of every figure-referring sentence, in corpus order.
pub fn reference_tmrs(corpus: &LoadedCorpus, resources: &Resources, window: usize) -> Vec<Tmr> {
    let detector = FigRefDetector::default();
    let ctx = resources.context();
    corpus
        .articles
        .par_iter()
        .map(|a| {
            detector
                .scan_article(&a.article, window)
                .iter()
                .map(|r| {
                    let s = a.article.sentence(r.candidates.ref_global_index).expect("detected sentence exists");
                    sentence_tmr(&ctx, s)
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Fits weights on the figure-referring sentences and writes the weight
/// table, a summary and the detection-rate sweep.
pub fn cmd_calibrate(cfg: &PipelineConfig) -> Result<CalibrationSummary, PipelineError> {
    cfg.validate()?;
    let resources = Resources::load(cfg)?;
    let corpus = load_corpus(cfg)?;
    let scoring_cfg = cfg.scoring();
    let tmrs = cfg.install(|| reference_tmrs(&corpus, &resources, cfg.window))?;
    let table = scoring::calibrate(&tmrs, &scoring_cfg)?;
    if let Err(e) = table.validate(&scoring_cfg) {
        return Err(PipelineError::Internal(e.to_string()));
    }
    let ref_scores: Vec<f64> = tmrs.iter().map(|t| scoring::sentence_weight(t, &table, &scoring_cfg)).collect();
    let detection = scoring::detection_sweep(&ref_scores, table.mean_ref_weight, &cfg.lambdas)?;

    let summary = CalibrationSummary {
        articles: corpus.articles.len(),
        reference_sentences: tmrs.len(),
        unmappable_reference_sentences: tmrs.iter().filter(|t| t.is_unmappable()).count(),
        num_tmrs: table.counts.num_tmrs,
        num_concepts: table.counts.num_concepts,
        num_properties: table.counts.num_properties,
        mean_ref_weight: table.mean_ref_weight,
        errors: corpus.errors.clone(),
    };
    let mut inputs = corpus.hashes();
    inputs.extend(resources.hashes.clone());
    let mut report = provenance("calibrate", cfg, inputs, json!({}));
    report["summary"] = serde_json::to_value(&summary).expect("summary serializes");
    report["detection"] = serde_json::to_value(&detection).expect("rows serialize");

    cfg.prepare_out()?;
    write(&cfg.out_file(WEIGHTS_FILE), &table.to_json())?;
    write(&cfg.out_file(CALIBRATION_FILE), &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")))?;
    write(&cfg.out_file(DETECTION_SWEEP_FILE), &scoring::detection_tsv(&detection))?;
    Ok(summary)
}

/// One classified candidate sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub uid: String,
    pub global_index: usize,
    pub text: String,
    pub weight: f64,
    pub threshold_used: f64,
    pub is_descriptive: bool,
    pub tmr: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifySummary {
    pub candidates: usize,
    pub positives: usize,
    pub threshold: f64,
    pub errors: Vec<FileError>,
}

fn weights_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.weights.clone().unwrap_or_else(|| cfg.out_file(WEIGHTS_FILE))
}

pub fn load_weights(path: &Path) -> Result<WeightTable, PipelineError> {
    WeightTable::from_json(&read(path)?).map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))
}

/// Scores every candidate sentence (the union of neighbor sets per article).
pub fn classify_corpus(
    corpus: &LoadedCorpus,
    resources: &Resources,
    table: &WeightTable,
    scoring_cfg: &ScoringConfig,
    threshold: f64,
) -> Vec<ScoreRecord> {
    let detector = FigRefDetector::default();
    let ctx = resources.context();
    corpus
        .articles
        .par_iter()
        .map(|a| {
            detector
                .candidate_population(&a.article, scoring_cfg.window)
                .into_iter()
                .map(|gi| {
                    let s = a.article.sentence(gi).expect("candidate sentence exists");
                    let tmr = sentence_tmr(&ctx, s);
                    let score = scoring::SentenceScore::new(gi, scoring::sentence_weight(&tmr, table, scoring_cfg), threshold);
                    ScoreRecord {
                        uid: a.article.uid.clone(),
                        global_index: gi,
                        text: s.text.clone(),
                        weight: score.weight,
                        threshold_used: score.threshold_used,
                        is_descriptive: score.is_descriptive,
                        tmr: tmr.canonical_json(),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

pub fn cmd_classify(cfg: &PipelineConfig) -> Result<ClassifySummary, PipelineError> {
    cfg.validate()?;
    let wpath = weights_path(cfg);
    let table = load_weights(&wpath)?;
    let scoring_cfg = cfg.scoring();
    table
        .validate(&scoring_cfg)
        .map_err(|e| PipelineError::Data(format!("{}: {e}", wpath.display())))?;
    let threshold = scoring::compute_threshold(table.mean_ref_weight, cfg.lambda)?;
    let resources = Resources::load(cfg)?;
    let corpus = load_corpus(cfg)?;
    let records = cfg.install(|| classify_corpus(&corpus, &resources, &table, &scoring_cfg, threshold))?;

    let mut inputs = corpus.hashes();
    inputs.extend(resources.hashes.clone());
    inputs.insert("weights".into(), sha256_hex(&read(&wpath)?));
    let header = provenance(
        "classify",
        cfg,
        inputs,
        json!({"mean_ref_weight": table.mean_ref_weight, "lambda": cfg.lambda, "threshold": threshold, "errors": corpus.errors}),
    );
    let lines = std::iter::once(header).chain(records.iter().map(|r| serde_json::to_value(r).expect("record serializes")));
    cfg.prepare_out()?;
    write(&cfg.out_file(SCORES_FILE), &jsonl(lines))?;
    Ok(ClassifySummary {
        candidates: records.len(),
        positives: records.iter().filter(|r| r.is_descriptive).count(),
        threshold,
        errors: corpus.errors,
    })
}

/// Scores file contents: the header's mean reference weight plus records.
#[derive(Debug, Clone)]
pub struct ScoresFile {
    pub mean_ref_weight: f64,
    pub records: Vec<ScoreRecord>,
}

pub fn read_scores(text: &str) -> Result<ScoresFile, PipelineError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Value = lines
        .next()
        .map(serde_json::from_str)
        .transpose()
        .map_err(|e| PipelineError::Data(format!("scores header: {e}")))?
        .ok_or_else(|| PipelineError::Data("scores file is empty".into()))?;
    let mean_ref_weight = header["provenance"]["extra"]["mean_ref_weight"]
        .as_f64()
        .ok_or_else(|| PipelineError::Data("scores header lacks mean_ref_weight".into()))?;
    let records = lines
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| PipelineError::Data(format!("scores line {}: {e}", i + 2))))
        .collect::<Result<_, _>>()?;
    Ok(ScoresFile {
        mean_ref_weight,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldLabel {
    pub uid: String,
    pub global_index: usize,
    pub label: u8,
}

pub fn read_gold(text: &str) -> Result<Vec<GoldLabel>, PipelineError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| PipelineError::Data(format!("gold line {}: {e}", i + 1))))
        .collect()
}

/// Scores of the gold-labeled sentences, aligned with `gold`.
pub fn align_gold(scores: &ScoresFile, gold: &[GoldLabel]) -> Result<(Vec<f64>, Vec<bool>), PipelineError> {
    let by_id: BTreeMap<(&str, usize), f64> = scores
        .records
        .iter()
        .map(|r| ((r.uid.as_str(), r.global_index), r.weight))
        .collect();
    let missing: Vec<String> = gold
        .iter()
        .filter(|g| !by_id.contains_key(&(g.uid.as_str(), g.global_index)))
        .map(|g| format!("{}#{}", g.uid, g.global_index))
        .collect();
    if !missing.is_empty() {
        return Err(PipelineError::Data(format!("gold ids without scores: {}", missing.join(", "))));
    }
    Ok(gold
        .iter()
        .map(|g| (by_id[&(g.uid.as_str(), g.global_index)], g.label == 1))
        .unzip())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub lambda: f64,
    pub threshold: f64,
    pub labeled: usize,
    pub metrics: scoring::Metrics,
    pub sweep: Vec<scoring::SweepRow>,
}

pub fn cmd_evaluate(cfg: &PipelineConfig) -> Result<EvaluationReport, PipelineError> {
    cfg.validate()?;
    let scores_path = cfg.scores.clone().unwrap_or_else(|| cfg.out_file(SCORES_FILE));
    let gold_path = cfg.require(&cfg.gold, "gold")?;
    let scores_bytes = read(&scores_path)?;
    let gold_bytes = read(gold_path)?;
    let scores = read_scores(&String::from_utf8_lossy(&scores_bytes))?;
    let gold = read_gold(&String::from_utf8_lossy(&gold_bytes))?;
    let (weights, labels) = align_gold(&scores, &gold)?;

    let threshold = scoring::compute_threshold(scores.mean_ref_weight, cfg.lambda)?;
    let predictions: Vec<bool> = weights.iter().map(|&w| scoring::classify(w, threshold)).collect();
    let metrics = scoring::evaluate(&predictions, &labels)?;
    let sweep = scoring::lambda_sweep(&weights, scores.mean_ref_weight, &cfg.lambdas, &labels)?;
    let report = EvaluationReport {
        lambda: cfg.lambda,
        threshold,
        labeled: gold.len(),
        metrics,
        sweep,
    };
    let inputs = BTreeMap::from([
        ("scores".to_string(), sha256_hex(&scores_bytes)),
        ("gold".to_string(), sha256_hex(&gold_bytes)),
    ]);
    let mut out = provenance("evaluate", cfg, inputs, json!({}));
    out["report"] = serde_json::to_value(&report).expect("report serializes");
    cfg.prepare_out()?;
    write(&cfg.out_file(SWEEP_FILE), &scoring::sweep_tsv(&report.sweep))?;
    write(&cfg.out_file(METRICS_FILE), &format!("{}\n", serde_json::to_string_pretty(&out).expect("json")))?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineReport {
    pub cv: CvReport,
    /// Concept-model metrics on the gold labels, when scores and gold are given.
    pub concept: Option<scoring::Metrics>,
}

pub fn comparison_tsv(report: &BaselineReport) -> String {
    let mut out = String::from("model\tf1\taccuracy\n");
    if let Some(m) = &report.concept {
        out.push_str(&format!("concept\t{:.4}\t{:.4}\n", m.f1, m.accuracy));
    }
    out.push_str(&format!("bag-of-words\t{:.4}\t{:.4}\n", report.cv.mean_f1, report.cv.mean_accuracy));
    out
}

pub fn cmd_baseline(cfg: &PipelineConfig) -> Result<BaselineReport, PipelineError> {
    cfg.validate()?;
    let path = cfg.require(&cfg.labeled, "labeled")?;
    let bytes = read(path)?;
    let items = baseline::load_labeled_jsonl(&String::from_utf8_lossy(&bytes))?;
    let hp = LogRegHyperparams {
        seed: cfg.seed,
        ..LogRegHyperparams::default()
    };
    let cv = cfg.install(|| baseline::kfold_cv(&items, cfg.folds, cfg.seed, &hp))??;
    let mut inputs = BTreeMap::from([("labeled".to_string(), sha256_hex(&bytes))]);
    let concept = match (&cfg.scores, &cfg.gold) {
        (Some(scores_path), Some(gold_path)) => {
            let sb = read(scores_path)?;
            let gb = read(gold_path)?;
            inputs.insert("scores".into(), sha256_hex(&sb));
            inputs.insert("gold".into(), sha256_hex(&gb));
            let scores = read_scores(&String::from_utf8_lossy(&sb))?;
            let (weights, labels) = align_gold(&scores, &read_gold(&String::from_utf8_lossy(&gb))?)?;
            let threshold = scoring::compute_threshold(scores.mean_ref_weight, cfg.lambda)?;
            let predictions: Vec<bool> = weights.iter().map(|&w| scoring::classify(w, threshold)).collect();
            Some(scoring::evaluate(&predictions, &labels)?)
        }
        _ => None,
    };
    let report = BaselineReport { cv, concept };
    let mut out = provenance("baseline", cfg, inputs, json!({"hyperparams": hp}));
    out["report"] = serde_json::to_value(&report).expect("report serializes");
    cfg.prepare_out()?;
    write(&cfg.out_file(BASELINE_FILE), &format!("{}\n", serde_json::to_string_pretty(&out).expect("json")))?;
    write(&cfg.out_file(COMPARISON_FILE), &comparison_tsv(&report))?;
    Ok(report)
}

/// detect, calibrate, classify and (with gold labels) evaluate in sequence.
pub fn run_all(cfg: &PipelineConfig) -> Result<Option<EvaluationReport>, PipelineError> {
    cmd_detect(cfg)?;
    cmd_calibrate(cfg)?;
    // later stages read what the earlier ones wrote into `out`; leaving the
    // paths unset keeps the echoed config free of the output location
    let mut staged = cfg.clone();
    staged.weights = None;
    staged.scores = None;
    cmd_classify(&staged)?;
    if cfg.gold.is_some() {
        return cmd_evaluate(&staged).map(Some);
    }
    Ok(None)
}
