//! Seeded synthetic dataset: a few informative columns plus uniform noise.
//!
//! Each informative column is drawn from `[0, 0.5 - margin] ∪ [0.5 + margin, 1]`
//! and contributes one bit (`value > 0.5`) to the class label, giving
//! `2^informative` classes. Noise columns are uniform on `[0, 1]` and carry no
//! label information. Informative columns come first.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{LabeledDataset, Source};
use crate::error::{Error, Result};
use crate::optim::seeded_rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub samples: usize,
    pub informative: usize,
    pub noise: usize,
    /// Half-width of the empty band around 0.5 in informative columns.
    pub margin: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            samples: 400,
            informative: 2,
            noise: 8,
            margin: 0.1,
            seed: 7,
        }
    }
}

impl SyntheticSpec {
    pub fn n_features(&self) -> usize {
        self.informative + self.noise
    }

    pub fn informative_columns(&self) -> std::ops::Range<usize> {
        0..self.informative
    }
}

pub fn generate<T: Scalar>(spec: &SyntheticSpec) -> Result<LabeledDataset<T>> {
    if spec.informative == 0 || spec.informative > 8 {
        return Err(Error::config("synthetic data needs 1..=8 informative columns"));
    }
    if !(0.0..0.5).contains(&spec.margin) {
        return Err(Error::config("synthetic margin must lie in [0, 0.5)"));
    }
    if spec.samples == 0 {
        return Err(Error::config("synthetic data needs at least one sample"));
    }
    let n_classes = 1usize << spec.informative;
    let cols = spec.n_features();
    let mut rng = seeded_rng(spec.seed);
    let mut features = Vec::with_capacity(spec.samples * cols);
    let mut labels = Vec::with_capacity(spec.samples);
    for i in 0..spec.samples {
        // cycle through classes so every class is equally represented
        let label = i % n_classes;
        for bit in 0..spec.informative {
            let u: f64 = rng.gen_range(0.0..(0.5 - spec.margin));
            let v = if (label >> bit) & 1 == 1 { 1.0 - u } else { u };
            features.push(T::of(v));
        }
        for _ in 0..spec.noise {
            features.push(T::of(rng.gen::<f64>()));
        }
        labels.push(label);
    }
    let feature_names = (0..cols)
        .map(|j| {
            if j < spec.informative {
                format!("informative{j}")
            } else {
                format!("noise{}", j - spec.informative)
            }
        })
        .collect();
    LabeledDataset::new(
        features,
        cols,
        labels,
        (0..n_classes).map(|k| format!("class{k}")).collect(),
        feature_names,
        Source::Synthetic,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_informative_bits() {
        let spec = SyntheticSpec::default();
        let ds: LabeledDataset<f64> = generate(&spec).unwrap();
        assert_eq!(ds.n_features(), 10);
        assert_eq!(ds.n_classes(), 4);
        assert_eq!(ds.class_counts(), vec![100; 4]);
        for (row, &l) in ds.rows().zip(ds.labels()) {
            let bits = (row[0] > 0.5) as usize | ((row[1] > 0.5) as usize) << 1;
            assert_eq!(bits, l);
            assert!((row[0] - 0.5).abs() >= 0.1 && (row[1] - 0.5).abs() >= 0.1);
        }
    }

    #[test]
    fn deterministic() {
        let spec = SyntheticSpec::default();
        assert_eq!(generate::<f64>(&spec).unwrap(), generate::<f64>(&spec).unwrap());
    }
}
