//! Datasets, min-max normalization and reproducible train/test splits.

pub mod features;
pub mod native;
pub mod synthetic;
pub mod ucihar;
pub mod wisdm;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::seeded_rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Ucihar,
    Wisdm,
    Synthetic,
    Native,
}

/// Row-major feature matrix with 0-based integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    features: Vec<T>,
    n_features: usize,
    labels: Vec<usize>,
    class_names: Vec<String>,
    feature_names: Vec<String>,
    source: Source,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(
        features: Vec<T>,
        n_features: usize,
        labels: Vec<usize>,
        class_names: Vec<String>,
        feature_names: Vec<String>,
        source: Source,
    ) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::data("dataset needs at least one feature column"));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::data(format!(
                "{} values do not form {} rows of {} features",
                features.len(),
                labels.len(),
                n_features
            )));
        }
        if feature_names.len() != n_features {
            return Err(Error::data(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                n_features
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::data(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::data(format!(
                "non-finite value at row {}, column {}",
                pos / n_features,
                pos % n_features
            )));
        }
        Ok(Self {
            features,
            n_features,
            labels,
            class_names,
            feature_names,
            source,
        })
    }

    /// Dataset with generated names `f0..` and `class0..`.
    pub fn unnamed(features: Vec<T>, n_features: usize, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        Self::new(
            features,
            n_features,
            labels,
            (0..n_classes).map(|k| format!("class{k}")).collect(),
            (0..n_features).map(|j| format!("f{j}")).collect(),
            Source::Native,
        )
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.features.chunks_exact(self.n_features)
    }

    pub fn features(&self) -> &[T] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        Self {
            features,
            n_features: self.n_features,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            feature_names: self.feature_names.clone(),
            source: self.source,
        }
    }

    /// Keeps the columns where `mask` is true, in original order.
    pub fn project(&self, mask: &[bool]) -> Result<Self> {
        if mask.len() != self.n_features {
            return Err(Error::Shape {
                expected: self.n_features,
                found: mask.len(),
            });
        }
        let cols: Vec<usize> = (0..mask.len()).filter(|&j| mask[j]).collect();
        if cols.is_empty() {
            return Err(Error::data("projection mask selects no columns"));
        }
        let mut features = Vec::with_capacity(self.n_samples() * cols.len());
        for row in self.rows() {
            features.extend(cols.iter().map(|&j| row[j]));
        }
        Ok(Self {
            features,
            n_features: cols.len(),
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            feature_names: cols.iter().map(|&j| self.feature_names[j].clone()).collect(),
            source: self.source,
        })
    }

    /// Appends the rows of `other`; both must share the column and class layout.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if other.n_features != self.n_features || other.class_names != self.class_names {
            return Err(Error::data("cannot concatenate datasets with different layouts"));
        }
        let mut out = self.clone();
        out.features.extend_from_slice(&other.features);
        out.labels.extend_from_slice(&other.labels);
        Ok(out)
    }

    pub(crate) fn features_mut(&mut self) -> &mut [T] {
        &mut self.features
    }
}

/// Per-column min-max scaling onto `[bm, am]`, fit on training data only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams<T> {
    pub am: T,
    pub bm: T,
    pub min: Vec<T>,
    pub max: Vec<T>,
}

impl<T: Scalar> NormalizationParams<T> {
    pub fn fit(train: &LabeledDataset<T>, am: T, bm: T) -> Result<Self> {
        if !(am > bm) {
            return Err(Error::config(format!(
                "normalization target max {am} must exceed min {bm}"
            )));
        }
        if train.is_empty() {
            return Err(Error::data("cannot fit normalization on an empty dataset"));
        }
        let n = train.n_features();
        let mut min = vec![T::infinity(); n];
        let mut max = vec![T::neg_infinity(); n];
        for row in train.rows() {
            for j in 0..n {
                min[j] = min[j].min(row[j]);
                max[j] = max[j].max(row[j]);
            }
        }
        Ok(Self { am, bm, min, max })
    }

    /// Default target range `[0, 1]`.
    pub fn fit_unit(train: &LabeledDataset<T>) -> Result<Self> {
        Self::fit(train, T::one(), T::zero())
    }

    #[inline]
    pub fn normalize(&self, value: T, column: usize) -> T {
        normalize(value, self.min[column], self.max[column], self.am, self.bm)
    }

    pub fn apply(&self, dataset: &LabeledDataset<T>) -> Result<LabeledDataset<T>> {
        if dataset.n_features() != self.min.len() {
            return Err(Error::Shape {
                expected: self.min.len(),
                found: dataset.n_features(),
            });
        }
        let n = self.min.len();
        let mut out = dataset.clone();
        for (i, v) in out.features_mut().iter_mut().enumerate() {
            *v = self.normalize(*v, i % n);
        }
        Ok(out)
    }
}

/// `(am - bm) (x - min) / (max - min) + bm`; a constant column maps to `bm`.
/// Values outside `[min, max]` extrapolate linearly.
#[inline]
pub fn normalize<T: Scalar>(value: T, min: T, max: T, am: T, bm: T) -> T {
    let range = max - min;
    if range <= T::zero() {
        return bm;
    }
    if value == max {
        return am;
    }
    (am - bm) * ((value - min) / range) + bm
}

/// Train share and seeding for [`split_train_test`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Percentage of samples used for training, in `(0, 100)`.
    pub learning_percentage: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(learning_percentage: f64, seed: u64) -> Self {
        Self {
            learning_percentage,
            seed,
            stratified: true,
        }
    }
}

/// Train and test row indices (each sorted ascending).
pub fn split_indices(labels: &[usize], n_classes: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    let p = spec.learning_percentage;
    if !(p > 0.0 && p < 100.0) {
        return Err(Error::config(format!("learning percentage {p} must lie in (0, 100)")));
    }
    let n = labels.len();
    let n_train = (n as f64 * p / 100.0).round() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::data(format!(
            "learning percentage {p} of {n} samples leaves an empty split"
        )));
    }
    let mut rng = seeded_rng(spec.seed);
    let mut train = Vec::with_capacity(n_train);
    let mut test = Vec::with_capacity(n - n_train);

    if !spec.stratified {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        train.extend_from_slice(&order[..n_train]);
        test.extend_from_slice(&order[n_train..]);
    } else {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            if l >= n_classes {
                return Err(Error::data(format!("label {l} out of range for {n_classes} classes")));
            }
            by_class.entry(l).or_default().push(i);
        }
        if let Some((class, members)) = by_class.iter().find(|(_, m)| m.len() < 2) {
            return Err(Error::data(format!(
                "class {class} has {} sample(s); stratified splitting needs at least 2",
                members.len()
            )));
        }
        let quotas = stratified_quotas(&by_class, n_train, p)?;
        for ((_, members), quota) in by_class.iter_mut().zip(quotas) {
            members.shuffle(&mut rng);
            train.extend_from_slice(&members[..quota]);
            test.extend_from_slice(&members[quota..]);
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Per-class train counts summing to `n_train` (largest-remainder rounding),
/// keeping at least one train and one test sample in every class.
fn stratified_quotas(by_class: &BTreeMap<usize, Vec<usize>>, n_train: usize, p: f64) -> Result<Vec<usize>> {
    let sizes: Vec<usize> = by_class.values().map(Vec::len).collect();
    let exact: Vec<f64> = sizes.iter().map(|&s| s as f64 * p / 100.0).collect();
    let mut quotas: Vec<usize> = exact
        .iter()
        .zip(&sizes)
        .map(|(&e, &s)| (e.floor() as usize).clamp(1, s - 1))
        .collect();
    let mut assigned: usize = quotas.iter().sum();
    let remainder = |k: usize, q: &[usize]| exact[k] - q[k] as f64;
    while assigned < n_train {
        // largest remainder first, lower class id on ties
        let k = (0..sizes.len())
            .filter(|&k| quotas[k] + 1 < sizes[k])
            .fold(None, |best: Option<usize>, k| match best {
                Some(b) if remainder(b, &quotas) >= remainder(k, &quotas) => Some(b),
                _ => Some(k),
            })
            .ok_or_else(|| Error::data("cannot allocate stratified training quota"))?;
        quotas[k] += 1;
        assigned += 1;
    }
    while assigned > n_train {
        let k = (0..sizes.len())
            .filter(|&k| quotas[k] > 1)
            .fold(None, |best: Option<usize>, k| match best {
                Some(b) if remainder(b, &quotas) <= remainder(k, &quotas) => Some(b),
                _ => Some(k),
            })
            .ok_or_else(|| Error::data("cannot allocate stratified training quota"))?;
        quotas[k] -= 1;
        assigned -= 1;
    }
    Ok(quotas)
}

/// Stratified (by default) shuffled split into `(train, test)`.
pub fn split_train_test<T: Scalar>(
    dataset: &LabeledDataset<T>,
    spec: &SplitSpec,
) -> Result<(LabeledDataset<T>, LabeledDataset<T>)> {
    let (train, test) = split_indices(dataset.labels(), dataset.n_classes(), spec)?;
    Ok((dataset.subset(&train), dataset.subset(&test)))
}
