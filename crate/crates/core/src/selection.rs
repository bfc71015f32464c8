//! Wrapper feature selection: optimizer positions in `[0, 1]^NF` decode to
//! column masks, and a mask scores as the holdout accuracy of a classifier
//! trained on just those columns.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{split_indices, LabeledDataset, SplitSpec};
use crate::error::{Error, Result};
use crate::nn::{holdout_accuracy, ClassifierConfig};
use crate::optim::{
    run_cbo, run_firefly, run_pso, BoundsBox, CboConfig, FfConfig, ObjectiveSpec, OptimizationTrace, PsoConfig,
};
use crate::scalar::Scalar;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Share of the training portion kept for fitting during selection; the rest
/// is the validation holdout.
pub const DEFAULT_HOLDOUT_TRAIN_PERCENTAGE: f64 = 80.0;

/// Largest feature count [`exhaustive_search`] accepts.
pub const EXHAUSTIVE_MAX_FEATURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureMask {
    included: Vec<bool>,
}

impl FeatureMask {
    pub fn new(included: Vec<bool>) -> Result<Self> {
        if !included.iter().any(|&b| b) {
            return Err(Error::config("feature mask must include at least one column"));
        }
        Ok(Self { included })
    }

    pub fn all(n: usize) -> Result<Self> {
        Self::new(vec![true; n])
    }

    /// From 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::config(format!("mask entries must be 0 or 1, found {b}")));
        }
        Self::new(bits.iter().map(|&b| b == 1).collect())
    }

    /// Parses `"1,0,1"` or `"101"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bits: Vec<u8> = if text.contains(',') {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::config(format!("bad mask entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::config(format!("bad mask character {c:?}"))),
                })
                .collect::<Result<_>>()?
        };
        Self::from_bits(&bits)
    }

    pub fn len(&self) -> usize {
        self.included.len()
    }

    pub fn is_empty(&self) -> bool {
        self.included.is_empty()
    }

    pub fn count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }

    pub fn included(&self) -> &[bool] {
        &self.included
    }

    pub fn contains(&self, column: usize) -> bool {
        self.included.get(column).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.included
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.included.iter().map(|&b| u8::from(b)).collect()
    }

    /// FNV-1a over the mask bits and length.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in (self.len() as u64)
            .to_le_bytes()
            .into_iter()
            .chain(self.included.iter().map(|&b| u8::from(b)))
        {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.included {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Column `d` is kept iff `position[d] >= tau`; if none is, the largest
/// component (lowest index on ties) is kept alone.
pub fn decode_mask<T: Scalar>(position: &[T], tau: T) -> Result<FeatureMask> {
    if position.is_empty() {
        return Err(Error::config("cannot decode an empty position"));
    }
    let mut included: Vec<bool> = position.iter().map(|&v| v >= tau).collect();
    if !included.iter().any(|&b| b) {
        included[crate::nn::argmax(position)] = true;
    }
    Ok(FeatureMask { included })
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Classifier seed for scoring `mask` under run seed `seed`.
pub fn candidate_seed(seed: u64, mask: &FeatureMask) -> u64 {
    mix(seed ^ mix(mask.fingerprint()))
}

/// Everything the wrapper objective needs besides the position.
#[derive(Debug, Clone)]
pub struct WrapperFitnessSpec<T> {
    train: LabeledDataset<T>,
    validation: LabeledDataset<T>,
    classifier: ClassifierConfig,
    threshold: f64,
    seed: u64,
}

impl<T: Scalar> WrapperFitnessSpec<T> {
    pub fn new(
        train: LabeledDataset<T>,
        validation: LabeledDataset<T>,
        classifier: ClassifierConfig,
        seed: u64,
    ) -> Result<Self> {
        if train.is_empty() || validation.is_empty() {
            return Err(Error::data(
                "wrapper fitness needs nonempty train and validation splits",
            ));
        }
        if train.n_features() != validation.n_features() {
            return Err(Error::Shape {
                expected: train.n_features(),
                found: validation.n_features(),
            });
        }
        Ok(Self {
            train,
            validation,
            classifier,
            threshold: DEFAULT_THRESHOLD,
            seed,
        })
    }

    /// Carves a stratified validation holdout out of `train_pool`.
    pub fn holdout(train_pool: &LabeledDataset<T>, classifier: ClassifierConfig, seed: u64) -> Result<Self> {
        let spec = SplitSpec::new(DEFAULT_HOLDOUT_TRAIN_PERCENTAGE, seed);
        let (fit, val) = split_indices(train_pool.labels(), train_pool.n_classes(), &spec)?;
        Self::new(train_pool.subset(&fit), train_pool.subset(&val), classifier, seed)
    }

    pub fn with_threshold(mut self, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::config(format!("threshold must lie in (0, 1), got {threshold}")));
        }
        self.threshold = threshold;
        Ok(self)
    }

    pub fn n_features(&self) -> usize {
        self.train.n_features()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn classifier(&self) -> &ClassifierConfig {
        &self.classifier
    }

    pub fn train(&self) -> &LabeledDataset<T> {
        &self.train
    }

    pub fn validation(&self) -> &LabeledDataset<T> {
        &self.validation
    }

    /// Holdout accuracy of the classifier trained on `mask`'s columns.
    pub fn score_mask(&self, mask: &FeatureMask) -> Result<f64> {
        if mask.len() != self.n_features() {
            return Err(Error::Shape {
                expected: self.n_features(),
                found: mask.len(),
            });
        }
        let train = self.train.project(mask.included())?;
        let validation = self.validation.project(mask.included())?;
        let classifier = self.classifier.with_seed(candidate_seed(self.seed, mask));
        holdout_accuracy(&classifier, &train, &validation)
    }
}

/// Decodes `position` and scores the resulting mask.
pub fn wrapper_fitness<T: Scalar>(position: &[T], spec: &WrapperFitnessSpec<T>) -> Result<f64> {
    if position.len() != spec.n_features() {
        return Err(Error::Shape {
            expected: spec.n_features(),
            found: position.len(),
        });
    }
    spec.score_mask(&decode_mask(position, T::of(spec.threshold))?)
}

/// Scores every nonempty mask. Results are in mask order, where mask `m`
/// (1-based) includes column `d` iff bit `d` of `m` is set.
pub fn exhaustive_search<T: Scalar>(spec: &WrapperFitnessSpec<T>) -> Result<Vec<(FeatureMask, f64)>> {
    let n = spec.n_features();
    if n > EXHAUSTIVE_MAX_FEATURES {
        return Err(Error::config(format!(
            "exhaustive search limited to {EXHAUSTIVE_MAX_FEATURES} features, got {n}"
        )));
    }
    (1u64..(1 << n))
        .into_par_iter()
        .map(|m| {
            let mask = FeatureMask {
                included: (0..n).map(|d| m >> d & 1 == 1).collect(),
            };
            let acc = spec.score_mask(&mask)?;
            Ok((mask, acc))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Cbo,
    Pso,
    Ff,
}

impl OptimizerKind {
    pub const ALL: [OptimizerKind; 3] = [Self::Cbo, Self::Pso, Self::Ff];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cbo => "cbo",
            Self::Pso => "pso",
            Self::Ff => "ff",
        }
    }

    /// Upper-case label used in report rows.
    pub fn label(self) -> &'static str {
        match self {
            Self::Cbo => "CBO",
            Self::Pso => "PSO",
            Self::Ff => "FF",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cbo" => Ok(Self::Cbo),
            "pso" => Ok(Self::Pso),
            "ff" | "firefly" => Ok(Self::Ff),
            other => Err(Error::config(format!(
                "unknown optimizer {other:?} (expected cbo, pso or ff)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub optimizer: OptimizerKind,
    pub population: usize,
    pub max_iterations: usize,
    /// Worker threads for fitness evaluation; 0 uses every core.
    pub jobs: usize,
}

impl SelectionConfig {
    pub fn new(optimizer: OptimizerKind, population: usize, max_iterations: usize) -> Self {
        Self {
            optimizer,
            population,
            max_iterations,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// `None` for the all-features baseline.
    pub optimizer: Option<OptimizerKind>,
    pub seed: u64,
    pub threshold: f64,
    /// One 0/1 entry per input column.
    pub mask: Vec<u8>,
    pub selected: usize,
    pub accuracy: f64,
    pub best_position: Vec<f64>,
    /// Best-so-far validation accuracy, initial population first.
    pub trace: Vec<f64>,
    pub evaluations: usize,
    /// Distinct masks actually trained.
    pub distinct_masks: usize,
}

impl SelectionResult {
    pub fn feature_mask(&self) -> Result<FeatureMask> {
        FeatureMask::from_bits(&self.mask)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Runs the chosen optimizer, maximizing [`wrapper_fitness`] over
/// `[0, 1]^NF`. The optimizer is seeded with the spec's seed.
pub fn select_features<T: Scalar>(spec: &WrapperFitnessSpec<T>, config: &SelectionConfig) -> Result<SelectionResult> {
    let bounds = BoundsBox::uniform(spec.n_features(), T::zero(), T::one())?;
    let tau = T::of(spec.threshold);
    let cache: Mutex<HashMap<FeatureMask, f64>> = Mutex::new(HashMap::new());
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    let evaluate = |x: &[T]| -> T {
        let scored = decode_mask(x, tau).and_then(|mask| {
            if let Some(&acc) = cache.lock().unwrap().get(&mask) {
                return Ok(acc);
            }
            let acc = spec.score_mask(&mask)?;
            cache.lock().unwrap().insert(mask, acc);
            Ok(acc)
        });
        match scored {
            Ok(acc) => T::of(acc),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                T::nan()
            }
        }
    };
    let objective = ObjectiveSpec::maximize(evaluate);
    let (pop, iters, seed, jobs) = (config.population, config.max_iterations, spec.seed, config.jobs);
    let run = match config.optimizer {
        OptimizerKind::Cbo => run_cbo(&objective, &CboConfig::new(pop, iters, seed, bounds).with_jobs(jobs)),
        OptimizerKind::Pso => run_pso(&objective, &PsoConfig::new(pop, iters, seed, bounds).with_jobs(jobs)),
        OptimizerKind::Ff => run_firefly(&objective, &FfConfig::new(pop, iters, seed, bounds).with_jobs(jobs)),
    };
    if let Some(e) = failure.lock().unwrap().take() {
        return Err(e);
    }
    let trace: OptimizationTrace<T> = run?;
    let mask = decode_mask(&trace.best_position, tau)?;
    Ok(SelectionResult {
        optimizer: Some(config.optimizer),
        seed,
        threshold: spec.threshold,
        selected: mask.count(),
        mask: mask.to_bits(),
        accuracy: trace.best_fitness.as_f64(),
        best_position: trace.best_position.iter().map(|v| v.as_f64()).collect(),
        trace: trace.best_fitness_per_iteration.iter().map(|v| v.as_f64()).collect(),
        evaluations: trace.evaluations,
        distinct_masks: cache.into_inner().unwrap().len(),
    })
}

/// The all-ones mask scored like any candidate, with an empty trace.
pub fn all_features_result<T: Scalar>(spec: &WrapperFitnessSpec<T>) -> Result<SelectionResult> {
    let mask = FeatureMask::all(spec.n_features())?;
    Ok(SelectionResult {
        optimizer: None,
        seed: spec.seed,
        threshold: spec.threshold,
        selected: mask.count(),
        accuracy: spec.score_mask(&mask)?,
        mask: mask.to_bits(),
        best_position: vec![1.0; spec.n_features()],
        trace: Vec::new(),
        evaluations: 1,
        distinct_masks: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::TrainConfig;

    #[test]
    fn threshold_rule() {
        let m = decode_mask(&[0.7, 0.2, 0.5], 0.5).unwrap();
        assert_eq!(m.to_bits(), vec![1, 0, 1]);
        assert_eq!(m.count(), 2);
    }

    #[test]
    fn argmax_fallback() {
        assert_eq!(decode_mask(&[0.1, 0.2], 0.5).unwrap().to_bits(), vec![0, 1]);
        assert_eq!(decode_mask(&[0.3, 0.3, 0.1], 0.5).unwrap().to_bits(), vec![1, 0, 0]);
    }

    #[test]
    fn saturation_and_empty() {
        assert_eq!(decode_mask(&[0.5, 1.0, 0.9], 0.5).unwrap().count(), 3);
        assert!(decode_mask::<f64>(&[], 0.5).is_err());
    }

    #[test]
    fn mask_parsing() {
        assert_eq!(FeatureMask::parse("1,0,1").unwrap().to_bits(), vec![1, 0, 1]);
        assert_eq!(FeatureMask::parse("0110").unwrap().indices(), vec![1, 2]);
        assert!(FeatureMask::parse("000").is_err());
        assert!(FeatureMask::parse("1,2").is_err());
        assert_eq!(FeatureMask::parse("101").unwrap().to_string(), "101");
    }

    #[test]
    fn seeds_depend_on_mask_only() {
        let a = FeatureMask::parse("1010").unwrap();
        let b = FeatureMask::parse("0101").unwrap();
        assert_eq!(candidate_seed(3, &a), candidate_seed(3, &a));
        assert_ne!(candidate_seed(3, &a), candidate_seed(3, &b));
        assert_ne!(candidate_seed(3, &a), candidate_seed(4, &a));
        assert_ne!(
            FeatureMask::parse("1").unwrap().fingerprint(),
            FeatureMask::parse("10").unwrap().fingerprint()
        );
    }

    #[test]
    fn optimizer_names_round_trip() {
        for k in OptimizerKind::ALL {
            assert_eq!(k.name().parse::<OptimizerKind>().unwrap(), k);
        }
        assert!("ga".parse::<OptimizerKind>().is_err());
    }

    fn tiny_spec() -> WrapperFitnessSpec<f64> {
        // column 0 decides the label, column 1 is constant
        let train =
            LabeledDataset::unnamed(vec![0.0, 0.5, 0.1, 0.5, 0.9, 0.5, 1.0, 0.5], 2, vec![0, 0, 1, 1], 2).unwrap();
        let val = LabeledDataset::unnamed(vec![0.05, 0.5, 0.95, 0.5], 2, vec![0, 1], 2).unwrap();
        WrapperFitnessSpec::new(train, val, ClassifierConfig::Knn { k: 1 }, 0).unwrap()
    }

    #[test]
    fn wrapper_fitness_scores_mask() {
        let spec = tiny_spec();
        assert_eq!(wrapper_fitness(&[0.9, 0.1], &spec).unwrap(), 1.0);
        assert!(wrapper_fitness(&[0.9], &spec).is_err());
        assert!(spec.clone().with_threshold(1.0).is_err());
    }

    #[test]
    fn exhaustive_enumerates_every_nonempty_mask() {
        let all = exhaustive_search(&tiny_spec()).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(all[0].0.to_bits(), vec![1, 0]);
    }

    #[test]
    fn zero_iterations_is_config_error() {
        let spec = tiny_spec();
        let r = select_features(&spec, &SelectionConfig::new(OptimizerKind::Cbo, 4, 0));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn result_json_round_trip() {
        let spec = tiny_spec();
        let cfg = ClassifierConfig::Gru(TrainConfig {
            hidden_dim: 2,
            epochs: 1,
            ..TrainConfig::default()
        });
        let spec = WrapperFitnessSpec::new(spec.train().clone(), spec.validation().clone(), cfg, 9).unwrap();
        let r = select_features(&spec, &SelectionConfig::new(OptimizerKind::Pso, 2, 1)).unwrap();
        let back = SelectionResult::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(spec.score_mask(&r.feature_mask().unwrap()).unwrap(), r.accuracy);
    }
}
