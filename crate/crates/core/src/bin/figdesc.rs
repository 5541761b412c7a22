use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use figdesc::pipeline::{self, ConfigFile, FileError, PipelineConfig, PipelineError};

#[derive(Parser, Debug)]
#[command(name = "figdesc", version, about = "Find figure-descriptive sentences in scientific articles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List figure-referring sentences and their candidate neighbors
    Detect,
    /// Fit element weights on figure-referring sentences
    Calibrate,
    /// Score and classify candidate sentences
    Classify,
    /// Compare scores with gold labels over a λ sweep
    Evaluate,
    /// Cross-validate the bag-of-words baseline
    Baseline,
    /// detect, calibrate, classify, then evaluate when --gold is given
    Run,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// TOML file with any of the options below
    #[arg(long, global = true, env = "FIGDESC_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_CORPUS")]
    corpus: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_ONTOLOGY")]
    ontology: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_SYNSETS")]
    synsets: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_EMBEDDINGS")]
    embeddings: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_GAZETTEER")]
    gazetteer: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_WEIGHTS")]
    weights: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_LAMBDA")]
    lambda: Option<f64>,
    #[arg(long, global = true, env = "FIGDESC_WINDOW")]
    window: Option<usize>,
    #[arg(long, global = true, env = "FIGDESC_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "FIGDESC_SEED")]
    seed: Option<u64>,
    /// Worker threads; 0 uses one per core
    #[arg(long, global = true, env = "FIGDESC_JOBS")]
    jobs: Option<usize>,
    /// Scores JSONL from classify
    #[arg(long, global = true, env = "FIGDESC_SCORES")]
    scores: Option<PathBuf>,
    /// Gold labels JSONL: {"uid", "global_index", "label"}
    #[arg(long, global = true, env = "FIGDESC_GOLD")]
    gold: Option<PathBuf>,
    /// Labeled sentences JSONL for the baseline: {"text", "label", "source"}
    #[arg(long, global = true, env = "FIGDESC_LABELED")]
    labeled: Option<PathBuf>,
    /// Cross-validation folds
    #[arg(long, global = true, env = "FIGDESC_FOLDS")]
    folds: Option<usize>,
    /// Comma-separated λ values for sweeps
    #[arg(long, global = true, env = "FIGDESC_LAMBDAS", value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
}

fn build_config(opts: Opts) -> Result<PipelineConfig, PipelineError> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_file(ConfigFile::from_toml(&text)?, &BTreeSet::new());
    }
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = opts.$field {
                cfg.$field = v.into();
            }
        )*};
    }
    set!(corpus, ontology, synsets, embeddings, gazetteer, weights, scores, gold, labeled);
    set!(lambda, window, out, seed, jobs, folds, lambdas);
    Ok(cfg)
}

fn report<T: serde::Serialize>(value: &T, errors: &[FileError]) -> Result<(), PipelineError> {
    println!("{}", serde_json::to_string_pretty(value).expect("summary serializes"));
    if errors.is_empty() {
        Ok(())
    } else {
        Err(PipelineError::Data(format!("{} file(s) could not be processed", errors.len())))
    }
}

fn run(command: Command, cfg: &PipelineConfig) -> Result<(), PipelineError> {
    match command {
        Command::Detect => {
            let s = pipeline::cmd_detect(cfg)?;
            report(&s, &s.errors)
        }
        Command::Calibrate => {
            let s = pipeline::cmd_calibrate(cfg)?;
            report(&s, &s.errors)
        }
        Command::Classify => {
            let s = pipeline::cmd_classify(cfg)?;
            report(&s, &s.errors)
        }
        Command::Evaluate => report(&pipeline::cmd_evaluate(cfg)?, &[]),
        Command::Baseline => report(&pipeline::cmd_baseline(cfg)?, &[]),
        Command::Run => report(&pipeline::run_all(cfg)?, &[]),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = build_config(cli.opts).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("figdesc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
