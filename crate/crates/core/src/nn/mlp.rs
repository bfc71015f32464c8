//! One-hidden-layer tanh network with a softmax output.
//!
//! Flat layout: `W1` (hidden × input), `b1` (hidden), `W2` (classes × hidden),
//! `b2` (classes).

use super::{check_training_data, cross_entropy, fit, init_uniform, softmax, training_rng};
use super::{Network, TrainConfig, TrainReport};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct MlpParameters<T> {
    input: usize,
    hidden: usize,
    classes: usize,
    data: Vec<T>,
}

impl<T: Scalar> MlpParameters<T> {
    pub fn zeros(input: usize, hidden: usize, classes: usize) -> Result<Self> {
        if input == 0 || hidden == 0 || classes == 0 {
            return Err(Error::config("network dimensions must be positive"));
        }
        let n = hidden * input + hidden + classes * hidden + classes;
        Ok(Self {
            input,
            hidden,
            classes,
            data: vec![T::zero(); n],
        })
    }

    pub fn init<R: rand::Rng>(input: usize, hidden: usize, classes: usize, rng: &mut R) -> Result<Self> {
        let mut p = Self::zeros(input, hidden, classes)?;
        let w1 = hidden * input;
        init_uniform(&mut p.data[..w1], input, rng);
        let w2 = w1 + hidden;
        init_uniform(&mut p.data[w2..w2 + classes * hidden], hidden, rng);
        Ok(p)
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    fn split(&self) -> (&[T], &[T], &[T], &[T]) {
        let (w1, rest) = self.data.split_at(self.hidden * self.input);
        let (b1, rest) = rest.split_at(self.hidden);
        let (w2, b2) = rest.split_at(self.classes * self.hidden);
        (w1, b1, w2, b2)
    }

    fn forward(&self, x: &[T]) -> (Vec<T>, Vec<T>) {
        let (w1, b1, w2, b2) = self.split();
        let a: Vec<T> = w1
            .chunks_exact(self.input)
            .zip(b1)
            .map(|(row, &b)| (b + row.iter().zip(x).map(|(&w, &v)| w * v).sum::<T>()).tanh())
            .collect();
        let z = w2
            .chunks_exact(self.hidden)
            .zip(b2)
            .map(|(row, &b)| b + row.iter().zip(&a).map(|(&w, &v)| w * v).sum::<T>())
            .collect();
        (a, z)
    }
}

impl<T: Scalar> Network<T> for MlpParameters<T> {
    fn n_features(&self) -> usize {
        self.input
    }

    fn n_classes(&self) -> usize {
        self.classes
    }

    fn params(&self) -> &[T] {
        &self.data
    }

    fn params_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    fn loss(&self, data: &LabeledDataset<T>, indices: &[usize]) -> T {
        let total: T = indices
            .iter()
            .map(|&i| cross_entropy(&self.forward(data.row(i)).1, data.labels()[i]))
            .sum();
        total / T::of_usize(indices.len())
    }

    fn loss_and_gradients(&self, data: &LabeledDataset<T>, indices: &[usize], grad: &mut [T]) -> T {
        let (h, d, k) = (self.hidden, self.input, self.classes);
        let (_, _, w2, _) = self.split();
        grad.iter_mut().for_each(|g| *g = T::zero());
        let (gw1, rest) = grad.split_at_mut(h * d);
        let (gb1, rest) = rest.split_at_mut(h);
        let (gw2, gb2) = rest.split_at_mut(k * h);
        let mut total = T::zero();
        let mut da = vec![T::zero(); h];
        for &i in indices {
            let x = data.row(i);
            let (a, z) = self.forward(x);
            total += cross_entropy(&z, data.labels()[i]);
            let mut dz = softmax(&z);
            dz[data.labels()[i]] -= T::one();
            da.iter_mut().for_each(|v| *v = T::zero());
            for c in 0..k {
                gb2[c] += dz[c];
                for j in 0..h {
                    gw2[c * h + j] += dz[c] * a[j];
                    da[j] += dz[c] * w2[c * h + j];
                }
            }
            for j in 0..h {
                let g = da[j] * (T::one() - a[j] * a[j]);
                gb1[j] += g;
                for (w, &v) in gw1[j * d..(j + 1) * d].iter_mut().zip(x) {
                    *w += g * v;
                }
            }
        }
        let n = T::of_usize(indices.len());
        grad.iter_mut().for_each(|g| *g /= n);
        total / n
    }

    fn probabilities(&self, sample: &[T]) -> Vec<T> {
        softmax(&self.forward(sample).1)
    }
}

/// Initializes from `config.seed` and trains on `data`.
pub fn train<T: Scalar>(data: &LabeledDataset<T>, config: &TrainConfig) -> Result<(MlpParameters<T>, TrainReport<T>)> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::data("training split is empty"));
    }
    check_training_data(data, data.n_features())?;
    let mut rng = training_rng(config.seed);
    let mut params = MlpParameters::init(data.n_features(), config.hidden_dim, data.n_classes(), &mut rng)?;
    let report = fit(&mut params, data, config, &mut rng)?;
    Ok((params, report))
}
