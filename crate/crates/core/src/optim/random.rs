//! Uniform random search, the budget-matched control for the other optimizers.

use serde::{Deserialize, Serialize};

use super::OptimizationTrace;
use super::{seeded_rng, validate_common, BoundsBox, Elite, Evaluator, ObjectiveSpec};
use crate::error::Result;
use crate::scalar::Scalar;

/// Draws `population` points per "iteration" so its trace lines up with the
/// population-based optimizers at an identical evaluation budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSearchConfig<T> {
    pub population: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub bounds: BoundsBox<T>,
}

pub fn run_random_search<T, F>(
    objective: &ObjectiveSpec<F>,
    config: &RandomSearchConfig<T>,
) -> Result<OptimizationTrace<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    validate_common(config.population, config.max_iterations, &config.bounds)?;
    let mut rng = seeded_rng(config.seed);
    let mut evaluator = Evaluator::new(objective, 1)?;
    let mut elite = Elite::new(objective.sense);
    for _ in 0..=config.max_iterations {
        let batch: Vec<Vec<T>> = (0..config.population).map(|_| config.bounds.sample(&mut rng)).collect();
        let refs: Vec<&[T]> = batch.iter().map(Vec::as_slice).collect();
        let fitness = evaluator.evaluate_all(&refs)?;
        elite.observe(refs.iter().copied().zip(fitness));
        elite.record();
    }
    Ok(elite.into_trace(evaluator.evaluations()))
}
