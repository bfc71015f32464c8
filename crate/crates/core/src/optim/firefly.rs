//! Firefly algorithm.
//!
//! Dimmer fireflies move toward every brighter one with attractiveness
//! `beta0 * exp(-gamma * r^2)`, where `r` is measured in box-normalized
//! coordinates, plus a uniform random step of relative size `alpha` (scaled
//! by the box width). `alpha` halves at each quarter of the run. A firefly
//! with no brighter neighbour performs only the random step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::OptimizationTrace;
use super::{seeded_rng, validate_common, BoundsBox, Elite, Evaluator, ObjectiveSpec, Sense};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FfConfig<T> {
    pub population: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub bounds: BoundsBox<T>,
    pub beta0: T,
    pub gamma: T,
    pub alpha: T,
    pub jobs: usize,
}

impl<T: Scalar> FfConfig<T> {
    /// Defaults: `beta0 = 1`, `gamma = 1`, `alpha = 0.25`.
    pub fn new(population: usize, max_iterations: usize, seed: u64, bounds: BoundsBox<T>) -> Self {
        Self {
            population,
            max_iterations,
            seed,
            bounds,
            beta0: T::one(),
            gamma: T::one(),
            alpha: T::of(0.25),
            jobs: 1,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.population, self.max_iterations, &self.bounds)?;
        for (name, v) in [("beta0", self.beta0), ("gamma", self.gamma), ("alpha", self.alpha)] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(Error::config(format!("firefly {name} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    /// Randomization scale in effect at `iteration` (0-based).
    pub fn alpha_at(&self, iteration: usize) -> T {
        let quarter = (4 * iteration) / self.max_iterations.max(1);
        self.alpha * T::of(0.5f64.powi(quarter.min(3) as i32))
    }
}

/// Moves `mover` toward `attractor`; `draw` yields uniform `[0, 1)` values.
pub fn attract<T: Scalar>(
    mover: &mut [T],
    attractor: &[T],
    bounds: &BoundsBox<T>,
    beta0: T,
    gamma: T,
    alpha: T,
    mut draw: impl FnMut() -> T,
) {
    let r2: T = mover
        .iter()
        .zip(attractor)
        .enumerate()
        .map(|(d, (&a, &b))| {
            let diff = (a - b) / bounds.width(d);
            diff * diff
        })
        .sum();
    let beta = beta0 * (-gamma * r2).exp();
    let half = T::of(0.5);
    for d in 0..mover.len() {
        let noise = alpha * (draw() - half) * bounds.width(d);
        mover[d] += beta * (attractor[d] - mover[d]) + noise;
    }
    bounds.clamp(mover);
}

/// Random step only.
pub fn random_walk<T: Scalar>(x: &mut [T], bounds: &BoundsBox<T>, alpha: T, mut draw: impl FnMut() -> T) {
    let half = T::of(0.5);
    for d in 0..x.len() {
        x[d] += alpha * (draw() - half) * bounds.width(d);
    }
    bounds.clamp(x);
}

pub fn run_firefly<T, F>(objective: &ObjectiveSpec<F>, config: &FfConfig<T>) -> Result<OptimizationTrace<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    config.validate()?;
    let sense: Sense = objective.sense;
    let mut rng = seeded_rng(config.seed);
    let mut evaluator = Evaluator::new(objective, config.jobs)?;
    let mut positions: Vec<Vec<T>> = (0..config.population).map(|_| config.bounds.sample(&mut rng)).collect();
    let refs: Vec<&[T]> = positions.iter().map(Vec::as_slice).collect();
    let mut fitness = evaluator.evaluate_all(&refs)?;

    let mut elite = Elite::new(sense);
    elite.observe(positions.iter().map(Vec::as_slice).zip(fitness.iter().copied()));
    elite.record();

    for iteration in 0..config.max_iterations {
        let alpha = config.alpha_at(iteration);
        let n = config.population;
        for i in 0..n {
            let mut moved = false;
            for j in 0..n {
                if j == i || !sense.is_better(fitness[j], fitness[i]) {
                    continue;
                }
                let attractor = positions[j].clone();
                attract(
                    &mut positions[i],
                    &attractor,
                    &config.bounds,
                    config.beta0,
                    config.gamma,
                    alpha,
                    || T::of(rng.gen::<f64>()),
                );
                moved = true;
            }
            if !moved {
                random_walk(&mut positions[i], &config.bounds, alpha, || T::of(rng.gen::<f64>()));
            }
        }
        let refs: Vec<&[T]> = positions.iter().map(Vec::as_slice).collect();
        fitness = evaluator.evaluate_all(&refs)?;
        elite.observe(positions.iter().map(Vec::as_slice).zip(fitness.iter().copied()));
        elite.record();
    }
    Ok(elite.into_trace(evaluator.evaluations()))
}
