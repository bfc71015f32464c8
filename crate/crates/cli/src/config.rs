//! Experiment settings from a `key = value` file overlaid with command-line
//! flags.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cbosel_core::data::wisdm::WindowSpec;
use cbosel_core::nn::{ClassifierConfig, TrainConfig};
use cbosel_core::optim::bench::BenchFunction;
use cbosel_core::selection::{OptimizerKind, DEFAULT_THRESHOLD};

use crate::error::CliError;

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "dataset",
    "data_dir",
    "optimizer",
    "population",
    "iterations",
    "learning_percentage",
    "classifier",
    "hidden_size",
    "epochs",
    "selection_epochs",
    "batch_size",
    "learning_rate",
    "chunk_size",
    "knn_k",
    "threshold",
    "seed",
    "jobs",
    "output",
    "train_samples",
    "test_samples",
    "window_length",
    "window_overlap",
    "axis",
    "mask",
    "function",
    "dim",
    "repeats",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Ucihar,
    Wisdm,
    Synthetic,
}

impl FromStr for DatasetKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "ucihar" | "uci-har" => Ok(Self::Ucihar),
            "wisdm" => Ok(Self::Wisdm),
            "synthetic" => Ok(Self::Synthetic),
            other => Err(CliError::Config(format!(
                "unknown dataset {other:?} (expected ucihar, wisdm or synthetic)"
            ))),
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ucihar => "ucihar",
            Self::Wisdm => "wisdm",
            Self::Synthetic => "synthetic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Gru,
    Knn,
    Nn,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [Self::Gru, Self::Knn, Self::Nn];
}

impl FromStr for ClassifierKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "gru" | "rnn" => Ok(Self::Gru),
            "knn" => Ok(Self::Knn),
            "nn" => Ok(Self::Nn),
            other => Err(CliError::Config(format!(
                "unknown classifier {other:?} (expected gru, knn or nn)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Optimizers,
    Classifiers,
    Features,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "optimizers" => Ok(Self::Optimizers),
            "classifiers" => Ok(Self::Classifiers),
            "features" => Ok(Self::Features),
            other => Err(CliError::Config(format!(
                "unknown axis {other:?} (expected optimizers, classifiers or features)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DatasetKind,
    pub data_dir: Option<PathBuf>,
    /// `None` keeps every feature.
    pub optimizer: Option<OptimizerKind>,
    pub population: usize,
    pub iterations: usize,
    /// `None` keeps a dataset's published split (UCI-HAR) or uses 70.
    pub learning_percentage: Option<f64>,
    pub classifier: ClassifierKind,
    pub hidden_size: Option<usize>,
    pub epochs: usize,
    pub selection_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub chunk_size: Option<usize>,
    pub knn_k: usize,
    pub threshold: f64,
    pub seed: u64,
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub train_samples: Option<usize>,
    pub test_samples: Option<usize>,
    pub window: WindowSpec,
    pub axis: Axis,
    pub mask: Option<String>,
    pub function: Option<BenchFunction>,
    pub dim: usize,
    pub repeats: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetKind::Synthetic,
            data_dir: None,
            optimizer: Some(OptimizerKind::Cbo),
            population: 10,
            iterations: 25,
            learning_percentage: None,
            classifier: ClassifierKind::Gru,
            hidden_size: None,
            epochs: 60,
            selection_epochs: 15,
            batch_size: 32,
            learning_rate: 0.01,
            chunk_size: None,
            knn_k: 5,
            threshold: DEFAULT_THRESHOLD,
            seed: 0,
            jobs: 0,
            output: None,
            train_samples: None,
            test_samples: None,
            window: WindowSpec::default(),
            axis: Axis::Optimizers,
            mask: None,
            function: None,
            dim: 10,
            repeats: 1,
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str, origin: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{}:{}: expected `key = value`", origin.display(), no + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "{}:{}: unknown key {key:?}",
                origin.display(),
                no + 1
            )));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::MissingInput(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text, path)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value {value:?} for {key}")))
}

impl ExperimentConfig {
    /// Builds a config from merged settings, validating every value.
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (key, value) in settings {
            let v = value.as_str();
            match key.as_str() {
                "dataset" => c.dataset = v.parse()?,
                "data_dir" => c.data_dir = Some(PathBuf::from(v)),
                "optimizer" => {
                    c.optimizer = if v.eq_ignore_ascii_case("none") {
                        None
                    } else {
                        Some(
                            v.parse()
                                .map_err(|e: cbosel_core::Error| CliError::Config(e.to_string()))?,
                        )
                    }
                }
                "population" => c.population = parse(key, v)?,
                "iterations" => c.iterations = parse(key, v)?,
                "learning_percentage" => c.learning_percentage = Some(parse(key, v)?),
                "classifier" => c.classifier = v.parse()?,
                "hidden_size" => c.hidden_size = Some(parse(key, v)?),
                "epochs" => c.epochs = parse(key, v)?,
                "selection_epochs" => c.selection_epochs = parse(key, v)?,
                "batch_size" => c.batch_size = parse(key, v)?,
                "learning_rate" => c.learning_rate = parse(key, v)?,
                "chunk_size" => c.chunk_size = Some(parse(key, v)?),
                "knn_k" => c.knn_k = parse(key, v)?,
                "threshold" => c.threshold = parse(key, v)?,
                "seed" => c.seed = parse(key, v)?,
                "jobs" => c.jobs = parse(key, v)?,
                "output" => c.output = Some(PathBuf::from(v)),
                "train_samples" => c.train_samples = Some(parse(key, v)?),
                "test_samples" => c.test_samples = Some(parse(key, v)?),
                "window_length" => c.window.length = parse(key, v)?,
                "window_overlap" => c.window.overlap = parse(key, v)?,
                "axis" => c.axis = v.parse()?,
                "mask" => c.mask = Some(v.to_string()),
                "function" => {
                    c.function = Some(
                        v.parse()
                            .map_err(|e: cbosel_core::Error| CliError::Config(e.to_string()))?,
                    )
                }
                "dim" => c.dim = parse(key, v)?,
                "repeats" => c.repeats = parse(key, v)?,
                other => return Err(CliError::Config(format!("unknown setting {other:?}"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.population < 2 || !self.population.is_multiple_of(2) {
            return bad("population must be an even number of at least 2");
        }
        if self.iterations == 0 {
            return bad("iterations must be positive");
        }
        if let Some(p) = self.learning_percentage {
            if !(p > 0.0 && p < 100.0) {
                return bad("learning percentage must lie in (0, 100)");
            }
        }
        if self.epochs == 0 || self.selection_epochs == 0 {
            return bad("epochs must be positive");
        }
        if self.hidden_size == Some(0) || self.chunk_size == Some(0) {
            return bad("hidden size and chunk size must be positive");
        }
        if self.batch_size == 0 || !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("batch size and learning rate must be positive");
        }
        if self.knn_k == 0 {
            return bad("knn_k must be at least 1");
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad("threshold must lie in (0, 1)");
        }
        if self.train_samples == Some(0) || self.test_samples == Some(0) {
            return bad("sample counts must be positive");
        }
        if self.dim == 0 || self.repeats == 0 {
            return bad("dim and repeats must be positive");
        }
        self.window.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    /// Classifier for the final model; `epochs` overrides the configured count.
    pub fn classifier_config(&self, kind: ClassifierKind, epochs: usize) -> ClassifierConfig {
        let base = TrainConfig {
            epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            chunk_size: self.chunk_size,
            seed: self.seed,
            ..TrainConfig::default()
        };
        match kind {
            ClassifierKind::Gru => ClassifierConfig::Gru(TrainConfig {
                hidden_dim: self.hidden_size.unwrap_or(base.hidden_dim),
                ..base
            }),
            ClassifierKind::Nn => ClassifierConfig::Nn(TrainConfig {
                hidden_dim: self.hidden_size.unwrap_or(TrainConfig::nn_default().hidden_dim),
                ..base
            }),
            ClassifierKind::Knn => ClassifierConfig::Knn { k: self.knn_k },
        }
    }
}
