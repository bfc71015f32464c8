//! Dataset preparation, selection and final evaluation shared by commands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use cbosel_core::data::synthetic::{self, SyntheticSpec};
use cbosel_core::data::ucihar::load_ucihar;
use cbosel_core::data::wisdm::load_wisdm;
use cbosel_core::data::{split_indices, split_train_test, NormalizationParams, SplitSpec};
use cbosel_core::metrics::evaluate_predictions;
use cbosel_core::nn::TrainedClassifier;
use cbosel_core::selection::{
    all_features_result, candidate_seed, select_features, FeatureMask, OptimizerKind, SelectionConfig, SelectionResult,
    WrapperFitnessSpec,
};
use cbosel_core::Dataset;
use log::info;

use crate::config::{ClassifierKind, DatasetKind, ExperimentConfig};
use crate::error::CliError;
use crate::report::ReportRow;

/// File name looked up when `--data-dir` points at a WISDM directory.
pub const WISDM_RAW_FILE: &str = "WISDM_ar_v1.1_raw.txt";

const DEFAULT_LEARNING_PERCENTAGE: f64 = 70.0;

/// Normalized train and test portions.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub train: Dataset,
    pub test: Dataset,
    /// `published` or the configured percentage.
    pub learning_percentage: String,
}

fn data_dir(cfg: &ExperimentConfig) -> Result<&Path, CliError> {
    let dir = cfg
        .data_dir
        .as_deref()
        .ok_or_else(|| CliError::MissingInput(format!("--data-dir is required for the {} dataset", cfg.dataset)))?;
    if !dir.exists() {
        return Err(CliError::MissingInput(format!("{} does not exist", dir.display())));
    }
    Ok(dir)
}

fn wisdm_path(dir: &Path) -> PathBuf {
    if dir.is_dir() {
        dir.join(WISDM_RAW_FILE)
    } else {
        dir.to_path_buf()
    }
}

/// Stratified subsample of `n` rows; the dataset is returned whole when it
/// has no more than `n`.
fn subsample(ds: Dataset, n: Option<usize>, seed: u64) -> Result<Dataset, CliError> {
    let Some(n) = n else { return Ok(ds) };
    if n >= ds.n_samples() {
        return Ok(ds);
    }
    let p = n as f64 / ds.n_samples() as f64 * 100.0;
    let (keep, _) = split_indices(ds.labels(), ds.n_classes(), &SplitSpec::new(p, seed))?;
    Ok(ds.subset(&keep))
}

/// Loads, splits, subsamples and normalizes (min-max fit on train).
pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared, CliError> {
    let split = |p: f64| SplitSpec::new(p, cfg.seed);
    let lp = cfg.learning_percentage.unwrap_or(DEFAULT_LEARNING_PERCENTAGE);
    let (train, test, label) = match cfg.dataset {
        DatasetKind::Synthetic => {
            let ds = synthetic::generate::<f64>(&SyntheticSpec::default())?;
            let (a, b) = split_train_test(&ds, &split(lp))?;
            (a, b, format!("{lp}"))
        }
        DatasetKind::Wisdm => {
            let path = wisdm_path(data_dir(cfg)?);
            if !path.exists() {
                return Err(CliError::MissingInput(format!("{} does not exist", path.display())));
            }
            let ds = load_wisdm::<f64>(&path, &cfg.window)?;
            let (a, b) = split_train_test(&ds, &split(lp))?;
            (a, b, format!("{lp}"))
        }
        DatasetKind::Ucihar => {
            let har = load_ucihar::<f64>(data_dir(cfg)?)?;
            match cfg.learning_percentage {
                None => (har.train, har.test, "published".to_string()),
                Some(p) => {
                    let (a, b) = split_train_test(&har.pooled()?, &split(p))?;
                    (a, b, format!("{p}"))
                }
            }
        }
    };
    let train = subsample(train, cfg.train_samples, cfg.seed)?;
    let test = subsample(test, cfg.test_samples, cfg.seed)?;
    let norm = NormalizationParams::fit_unit(&train)?;
    info!(
        "{}: {} train / {} test samples, {} features, {} classes",
        cfg.dataset,
        train.n_samples(),
        test.n_samples(),
        train.n_features(),
        train.n_classes()
    );
    Ok(Prepared {
        train: norm.apply(&train)?,
        test: norm.apply(&test)?,
        learning_percentage: label,
    })
}

/// Wrapper objective over the train portion, with the selection epoch budget.
pub fn wrapper_spec(cfg: &ExperimentConfig, prepared: &Prepared) -> Result<WrapperFitnessSpec<f64>, CliError> {
    let classifier = cfg.classifier_config(cfg.classifier, cfg.selection_epochs);
    Ok(WrapperFitnessSpec::holdout(&prepared.train, classifier, cfg.seed)?.with_threshold(cfg.threshold)?)
}

/// Runs `optimizer`, or scores the all-features mask when it is `None`.
pub fn run_selection(
    cfg: &ExperimentConfig,
    prepared: &Prepared,
    optimizer: Option<OptimizerKind>,
) -> Result<SelectionResult, CliError> {
    let spec = wrapper_spec(cfg, prepared)?;
    let start = Instant::now();
    let result = match optimizer {
        None => all_features_result(&spec)?,
        Some(kind) => {
            let sc = SelectionConfig {
                jobs: cfg.jobs,
                ..SelectionConfig::new(kind, cfg.population, cfg.iterations)
            };
            select_features(&spec, &sc)?
        }
    };
    info!(
        "selection ({}) kept {} of {} features, validation accuracy {:.6}, {} distinct masks, {:.1?}",
        optimizer.map_or("none", OptimizerKind::name),
        result.selected,
        result.mask.len(),
        result.accuracy,
        result.distinct_masks,
        start.elapsed()
    );
    Ok(result)
}

/// Trains `kind` on the masked train portion with the full epoch budget and
/// scores the masked test portion.
pub fn evaluate_mask(
    cfg: &ExperimentConfig,
    prepared: &Prepared,
    mask: &FeatureMask,
    kind: ClassifierKind,
    label: String,
) -> Result<ReportRow, CliError> {
    if mask.len() != prepared.train.n_features() {
        return Err(CliError::Config(format!(
            "mask has {} entries but the dataset has {} features",
            mask.len(),
            prepared.train.n_features()
        )));
    }
    let start = Instant::now();
    let classifier = cfg
        .classifier_config(kind, cfg.epochs)
        .with_seed(candidate_seed(cfg.seed, mask));
    let train = prepared.train.project(mask.included())?;
    let test = prepared.test.project(mask.included())?;
    let model = TrainedClassifier::train(&classifier, &train)?;
    let predicted = model.predict_labels(&test)?;
    let (_, report) = evaluate_predictions(test.labels(), &predicted, test.n_classes())?;
    let wall_time = start.elapsed();
    info!(
        "{label}: test accuracy {:.6} ({wall_time:.1?})",
        report.summary.accuracy
    );
    Ok(ReportRow {
        label,
        degenerate: report.has_degenerate(),
        metrics: report.summary,
        seed: cfg.seed,
        features: mask.count(),
        learning_percentage: prepared.learning_percentage.clone(),
        wall_time,
    })
}

pub fn classifier_label(kind: ClassifierKind) -> &'static str {
    match kind {
        ClassifierKind::Gru => "GRU",
        ClassifierKind::Knn => "KNN",
        ClassifierKind::Nn => "NN",
    }
}
