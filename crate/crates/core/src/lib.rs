//! Colliding Bodies Optimization as a wrapper feature selector over a GRU
//! activity classifier, with PSO and firefly baselines, dataset loaders and
//! classification metrics.
//!
//! Numeric code is generic over [`scalar::Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` and `f32` instantiations.

pub mod data;
pub mod error;
pub mod metrics;
pub mod nn;
pub mod optim;
pub mod scalar;
pub mod selection;

pub use error::{Error, Result};

pub type Dataset = data::LabeledDataset<f64>;
pub type Dataset32 = data::LabeledDataset<f32>;
pub type Bounds = optim::BoundsBox<f64>;
pub type Bounds32 = optim::BoundsBox<f32>;
pub type Trace = optim::OptimizationTrace<f64>;
pub type Trace32 = optim::OptimizationTrace<f32>;
pub type Gru = nn::GruParameters<f64>;
pub type Gru32 = nn::GruParameters<f32>;
pub type Mlp = nn::MlpParameters<f64>;
pub type Mlp32 = nn::MlpParameters<f32>;
pub type WrapperSpec = selection::WrapperFitnessSpec<f64>;
pub type WrapperSpec32 = selection::WrapperFitnessSpec<f32>;
