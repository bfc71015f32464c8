//! Classifiers: the GRU sequence model, a one-hidden-layer network and KNN.
//!
//! The two neural models keep all parameters in one flat vector so the shared
//! trainer ([`fit`]) can run momentum SGD with global-norm clipping over any
//! of them, and the gradient checks can perturb entries by index.

pub mod gru;
pub mod knn;
pub mod mlp;

use log::warn;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::optim::seeded_rng;
use crate::scalar::{l2_norm, Scalar};

pub use gru::{GruDims, GruParameters};
pub use mlp::MlpParameters;

/// Training hyperparameters shared by the GRU and the NN baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_dim: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    /// Global gradient-norm threshold.
    pub clip_norm: f64,
    /// Features per GRU timestep; `None` feeds the whole vector as one step.
    pub chunk_size: Option<usize>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_dim: 32,
            epochs: 60,
            batch_size: 32,
            learning_rate: 0.01,
            momentum: 0.9,
            clip_norm: 5.0,
            chunk_size: None,
            seed: 0,
        }
    }
}

impl TrainConfig {
    /// Defaults for the single-hidden-layer baseline (64 tanh units).
    pub fn nn_default() -> Self {
        Self {
            hidden_dim: 64,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_dim == 0 || self.batch_size == 0 {
            return Err(Error::config("hidden_dim and batch_size must be positive"));
        }
        if self.chunk_size == Some(0) {
            return Err(Error::config("chunk size must be positive"));
        }
        for (name, v) in [("learning_rate", self.learning_rate), ("clip_norm", self.clip_norm)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::config("momentum must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Class probabilities and their argmax.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    pub probabilities: Vec<T>,
    pub label: usize,
}

impl<T: Scalar> Prediction<T> {
    pub fn from_probabilities(probabilities: Vec<T>) -> Self {
        let label = argmax(&probabilities);
        Self { probabilities, label }
    }
}

/// Index of the largest entry, lowest index on ties.
pub fn argmax<T: Scalar>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Numerically stable softmax.
pub fn softmax<T: Scalar>(logits: &[T]) -> Vec<T> {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = logits.iter().map(|&z| (z - max).exp()).collect();
    let total: T = exps.iter().copied().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// `-ln softmax(logits)[label]`, computed via log-sum-exp.
pub fn cross_entropy<T: Scalar>(logits: &[T], label: usize) -> T {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let lse = max + logits.iter().map(|&z| (z - max).exp()).sum::<T>().ln();
    lse - logits[label]
}

/// A differentiable classifier with flat parameter storage.
pub trait Network<T: Scalar> {
    fn n_features(&self) -> usize;
    fn n_classes(&self) -> usize;
    fn params(&self) -> &[T];
    fn params_mut(&mut self) -> &mut [T];

    /// Mean cross-entropy over `indices` (repeats allowed), forward pass only.
    fn loss(&self, data: &LabeledDataset<T>, indices: &[usize]) -> T;

    /// Mean loss; writes the mean gradient into `grad` (overwriting it).
    fn loss_and_gradients(&self, data: &LabeledDataset<T>, indices: &[usize], grad: &mut [T]) -> T;

    /// Class probabilities for one sample of length `n_features()`.
    fn probabilities(&self, sample: &[T]) -> Vec<T>;
}

/// Per-epoch mean training loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport<T> {
    pub epoch_loss: Vec<T>,
}

pub(crate) fn check_training_data<T: Scalar>(data: &LabeledDataset<T>, n_features: usize) -> Result<()> {
    if data.is_empty() {
        return Err(Error::data("training split is empty"));
    }
    if data.n_features() != n_features {
        return Err(Error::Shape {
            expected: n_features,
            found: data.n_features(),
        });
    }
    Ok(())
}

/// Mini-batch momentum SGD with global-norm clipping.
pub fn fit<T, N, R>(net: &mut N, data: &LabeledDataset<T>, config: &TrainConfig, rng: &mut R) -> Result<TrainReport<T>>
where
    T: Scalar,
    N: Network<T>,
    R: Rng,
{
    config.validate()?;
    check_training_data(data, net.n_features())?;
    if let Some(&bad) = data.labels().iter().find(|&&l| l >= net.n_classes()) {
        return Err(Error::data(format!(
            "label {bad} out of range for {} classes",
            net.n_classes()
        )));
    }
    let n_params = net.params().len();
    let mut grad = vec![T::zero(); n_params];
    let mut velocity = vec![T::zero(); n_params];
    let lr = T::of(config.learning_rate);
    let mu = T::of(config.momentum);
    let clip = T::of(config.clip_norm);
    let mut order: Vec<usize> = (0..data.n_samples()).collect();
    let mut epoch_loss = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        order.shuffle(rng);
        let mut total = T::zero();
        for batch in order.chunks(config.batch_size) {
            let loss = net.loss_and_gradients(data, batch, &mut grad);
            if !loss.is_finite() {
                return Err(Error::Divergence {
                    epoch,
                    loss: loss.as_f64(),
                });
            }
            total += loss * T::of_usize(batch.len());
            let norm = l2_norm(&grad);
            if !norm.is_finite() {
                return Err(Error::Divergence {
                    epoch,
                    loss: loss.as_f64(),
                });
            }
            let scale = if norm > clip { clip / norm } else { T::one() };
            for ((p, v), &g) in net.params_mut().iter_mut().zip(&mut velocity).zip(&grad) {
                *v = mu * *v - lr * scale * g;
                *p += *v;
            }
        }
        epoch_loss.push(total / T::of_usize(data.n_samples()));
    }
    Ok(TrainReport { epoch_loss })
}

/// Probabilities and labels for every row of `data`.
pub fn predict<T: Scalar, N: Network<T>>(net: &N, data: &LabeledDataset<T>) -> Result<Vec<Prediction<T>>> {
    if data.n_features() != net.n_features() {
        return Err(Error::Shape {
            expected: net.n_features(),
            found: data.n_features(),
        });
    }
    Ok(data
        .rows()
        .map(|row| Prediction::from_probabilities(net.probabilities(row)))
        .collect())
}

/// Which classifier to train and with what settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassifierConfig {
    Gru(TrainConfig),
    Knn { k: usize },
    Nn(TrainConfig),
}

impl ClassifierConfig {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Gru(_) => "GRU",
            Self::Knn { .. } => "KNN",
            Self::Nn(_) => "NN",
        }
    }

    /// Same classifier with a different seed (KNN has none).
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            Self::Gru(c) => Self::Gru(TrainConfig { seed, ..c }),
            Self::Nn(c) => Self::Nn(TrainConfig { seed, ..c }),
            knn @ Self::Knn { .. } => knn,
        }
    }

    pub fn with_epochs(self, epochs: usize) -> Self {
        match self {
            Self::Gru(c) => Self::Gru(TrainConfig { epochs, ..c }),
            Self::Nn(c) => Self::Nn(TrainConfig { epochs, ..c }),
            knn @ Self::Knn { .. } => knn,
        }
    }
}

/// A fitted classifier of any supported kind.
#[derive(Debug, Clone)]
pub enum TrainedClassifier<T> {
    Gru(GruParameters<T>),
    Knn { train: LabeledDataset<T>, k: usize },
    Nn(MlpParameters<T>),
}

impl<T: Scalar> TrainedClassifier<T> {
    pub fn train(config: &ClassifierConfig, data: &LabeledDataset<T>) -> Result<Self> {
        match *config {
            ClassifierConfig::Gru(c) => Ok(Self::Gru(gru::train(data, &c)?.0)),
            ClassifierConfig::Nn(c) => Ok(Self::Nn(mlp::train(data, &c)?.0)),
            ClassifierConfig::Knn { k } => {
                if k == 0 {
                    return Err(Error::config("k must be at least 1"));
                }
                if data.is_empty() {
                    return Err(Error::data("training split is empty"));
                }
                Ok(Self::Knn { train: data.clone(), k })
            }
        }
    }

    pub fn predict_labels(&self, data: &LabeledDataset<T>) -> Result<Vec<usize>> {
        match self {
            Self::Gru(p) => Ok(predict(p, data)?.into_iter().map(|p| p.label).collect()),
            Self::Nn(p) => Ok(predict(p, data)?.into_iter().map(|p| p.label).collect()),
            Self::Knn { train, k } => knn::knn_predict(train, data, *k),
        }
    }
}

/// Trains and scores in one step; a diverged run scores 0 instead of failing.
pub fn holdout_accuracy<T: Scalar>(
    config: &ClassifierConfig,
    train: &LabeledDataset<T>,
    validation: &LabeledDataset<T>,
) -> Result<f64> {
    let model = match TrainedClassifier::train(config, train) {
        Ok(m) => m,
        Err(Error::Divergence { epoch, loss }) => {
            warn!("classifier diverged at epoch {epoch} (loss {loss}); scoring 0");
            return Ok(0.0);
        }
        Err(e) => return Err(e),
    };
    let predicted = model.predict_labels(validation)?;
    if predicted.is_empty() {
        return Err(Error::data("validation split is empty"));
    }
    let correct = predicted
        .iter()
        .zip(validation.labels())
        .filter(|(p, t)| p == t)
        .count();
    Ok(correct as f64 / predicted.len() as f64)
}

/// Worst agreement between analytic and central-difference gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientCheck {
    pub max_relative_error: f64,
    pub worst_parameter: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub checked: usize,
}

/// Compares every analytic gradient entry with `(L(p + h) - L(p - h)) / 2h`.
///
/// Relative error is `|a - n| / max(|a|, |n|, floor)`; the floor keeps
/// entries that are zero up to rounding from dominating.
pub fn gradient_check<N: Network<f64>>(
    net: &mut N,
    data: &LabeledDataset<f64>,
    indices: &[usize],
    step: f64,
    floor: f64,
) -> GradientCheck {
    let mut grad = vec![0.0; net.params().len()];
    net.loss_and_gradients(data, indices, &mut grad);
    let mut worst = GradientCheck {
        max_relative_error: 0.0,
        worst_parameter: 0,
        analytic: 0.0,
        numeric: 0.0,
        checked: grad.len(),
    };
    for (i, &analytic) in grad.iter().enumerate() {
        let orig = net.params()[i];
        net.params_mut()[i] = orig + step;
        let plus = net.loss(data, indices);
        net.params_mut()[i] = orig - step;
        let minus = net.loss(data, indices);
        net.params_mut()[i] = orig;
        let numeric = (plus - minus) / (2.0 * step);
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor);
        if rel > worst.max_relative_error {
            worst = GradientCheck {
                max_relative_error: rel,
                worst_parameter: i,
                analytic,
                numeric,
                checked: grad.len(),
            };
        }
    }
    worst
}

pub(crate) fn init_uniform<T: Scalar, R: Rng>(block: &mut [T], fan_in: usize, rng: &mut R) {
    let limit = (1.0 / fan_in.max(1) as f64).sqrt();
    for v in block {
        *v = T::of(rng.gen_range(-limit..=limit));
    }
}

pub(crate) fn training_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    seeded_rng(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_index() {
        assert_eq!(argmax(&[0.25, 0.5, 0.5, 0.1]), 1);
        assert_eq!(argmax(&[1.0 / 3.0; 3]), 0);
    }

    #[test]
    fn softmax_normalizes_extreme_logits() {
        let p = softmax(&[1000.0, 0.0, -1000.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(p[0], 1.0);
        let u = softmax(&[0.0f64; 6]);
        assert!(u.iter().all(|&x| (x - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn cross_entropy_uniform_is_ln_k() {
        let k = 6;
        assert!((cross_entropy(&vec![0.7; k], 2) - (k as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn train_config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        let bad = TrainConfig {
            chunk_size: Some(0),
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainConfig {
            momentum: 1.0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
