//! Command-line harness for wrapper feature selection experiments.

pub mod commands;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{read_config_file, ExperimentConfig};
use crate::error::{CliError, EXIT_CONFIG, EXIT_OK};

#[derive(Debug, Parser)]
#[command(
    name = "cbosel",
    version,
    about = "CBO wrapper feature selection for activity recognition"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select features and write the selection result as JSON.
    Select(Flags),
    /// Train on the (masked) train split and score the test split.
    Evaluate(Flags),
    /// Run an optimizer, classifier or feature-set comparison grid.
    Compare(Flags),
    /// Run every optimizer on a benchmark function.
    BenchOpt(Flags),
    /// Merge result CSVs into one table.
    Report(ReportArgs),
}

/// Values are kept as text and validated together with the config file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// `key = value` settings file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ucihar, wisdm or synthetic
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub data_dir: Option<String>,
    /// cbo, pso, ff or none
    #[arg(long)]
    pub optimizer: Option<String>,
    #[arg(long)]
    pub population: Option<String>,
    #[arg(long)]
    pub iterations: Option<String>,
    #[arg(long)]
    pub learning_percentage: Option<String>,
    /// gru, knn or nn
    #[arg(long)]
    pub classifier: Option<String>,
    #[arg(long)]
    pub hidden_size: Option<String>,
    /// Epochs for the final model.
    #[arg(long)]
    pub epochs: Option<String>,
    /// Epochs per candidate during selection.
    #[arg(long)]
    pub selection_epochs: Option<String>,
    #[arg(long)]
    pub batch_size: Option<String>,
    #[arg(long)]
    pub learning_rate: Option<String>,
    /// Features per GRU timestep; the whole vector when unset.
    #[arg(long)]
    pub chunk_size: Option<String>,
    #[arg(long)]
    pub knn_k: Option<String>,
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
    /// Stratified subsample size of the train split.
    #[arg(long)]
    pub train_samples: Option<String>,
    /// Stratified subsample size of the test split.
    #[arg(long)]
    pub test_samples: Option<String>,
    /// WISDM window length in samples.
    #[arg(long)]
    pub window_length: Option<String>,
    /// WISDM window overlap fraction in [0, 1).
    #[arg(long)]
    pub window_overlap: Option<String>,
    /// optimizers, classifiers or features (compare)
    #[arg(long)]
    pub axis: Option<String>,
    /// Selection JSON file or literal mask such as 1,0,1 (evaluate)
    #[arg(long)]
    pub mask: Option<String>,
    /// sphere, rastrigin or rosenbrock (bench-opt)
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub dim: Option<String>,
    /// Seeds to run, counting up from --seed (bench-opt)
    #[arg(long)]
    pub repeats: Option<String>,
}

impl Flags {
    fn pairs(&self) -> [(&'static str, &Option<String>); 27] {
        [
            ("dataset", &self.dataset),
            ("data_dir", &self.data_dir),
            ("optimizer", &self.optimizer),
            ("population", &self.population),
            ("iterations", &self.iterations),
            ("learning_percentage", &self.learning_percentage),
            ("classifier", &self.classifier),
            ("hidden_size", &self.hidden_size),
            ("epochs", &self.epochs),
            ("selection_epochs", &self.selection_epochs),
            ("batch_size", &self.batch_size),
            ("learning_rate", &self.learning_rate),
            ("chunk_size", &self.chunk_size),
            ("knn_k", &self.knn_k),
            ("threshold", &self.threshold),
            ("seed", &self.seed),
            ("jobs", &self.jobs),
            ("output", &self.output),
            ("train_samples", &self.train_samples),
            ("test_samples", &self.test_samples),
            ("window_length", &self.window_length),
            ("window_overlap", &self.window_overlap),
            ("axis", &self.axis),
            ("mask", &self.mask),
            ("function", &self.function),
            ("dim", &self.dim),
            ("repeats", &self.repeats),
        ]
    }

    /// Config file values overlaid with the flags given.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut settings = match &self.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                settings.insert(key.to_string(), v.clone());
            }
        }
        ExperimentConfig::from_settings(&settings)
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Result CSV files, rendered in the order given.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::write(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::write(path, e))
}

/// Writes the artifact to `output` (plus the summary beside it) or prints
/// the artifact to stdout and the summary to stderr.
fn emit(outcome: &Outcome, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            write_file(path, &outcome.artifact)?;
            write_file(&summary_path(path), &outcome.summary)?;
            print!("{}", outcome.summary);
        }
        None => {
            print!("{}", outcome.artifact);
            eprint!("{}", outcome.summary);
        }
    }
    let _ = std::io::stdout().flush();
    Ok(())
}

/// `out/run.csv` → `out/run.txt`; `report.md` → `report.md.txt`.
pub fn summary_path(output: &Path) -> PathBuf {
    match output.extension() {
        Some(ext) if ext == "txt" || ext == "md" => {
            let mut s = output.as_os_str().to_owned();
            s.push(".txt");
            PathBuf::from(s)
        }
        _ => output.with_extension("txt"),
    }
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    let (outcome, output) = match command {
        Command::Report(args) => (commands::cmd_report(&args.inputs)?, args.output.clone()),
        Command::Select(f) | Command::Evaluate(f) | Command::Compare(f) | Command::BenchOpt(f) => {
            let cfg = f.resolve()?;
            let outcome = match command {
                Command::Select(_) => commands::cmd_select(&cfg)?,
                Command::Evaluate(_) => commands::cmd_evaluate(&cfg)?,
                Command::Compare(_) => commands::cmd_compare(&cfg)?,
                _ => commands::cmd_bench_opt(&cfg)?,
            };
            (outcome, cfg.output.clone())
        }
    };
    emit(&outcome, output.as_deref())
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
