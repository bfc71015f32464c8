//! Global-best particle swarm optimization with constriction-style constants.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::OptimizationTrace;
use super::{seeded_rng, validate_common, BoundsBox, Elite, Evaluator, ObjectiveSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig<T> {
    pub population: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub bounds: BoundsBox<T>,
    pub inertia: T,
    pub cognitive: T,
    pub social: T,
    pub jobs: usize,
}

impl<T: Scalar> PsoConfig<T> {
    /// Defaults: `w = 0.729`, `c1 = c2 = 1.49445`.
    pub fn new(population: usize, max_iterations: usize, seed: u64, bounds: BoundsBox<T>) -> Self {
        Self {
            population,
            max_iterations,
            seed,
            bounds,
            inertia: T::of(0.729),
            cognitive: T::of(1.49445),
            social: T::of(1.49445),
            jobs: 1,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.population, self.max_iterations, &self.bounds)?;
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(Error::config(format!("PSO {name} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

/// One velocity update `w v + c1 r1 (p - x) + c2 r2 (g - x)`, per component.
#[allow(clippy::too_many_arguments)]
pub fn velocity_update<T: Scalar>(
    velocity: &mut [T],
    position: &[T],
    personal_best: &[T],
    global_best: &[T],
    config: &PsoConfig<T>,
    mut draw: impl FnMut() -> T,
) {
    for d in 0..velocity.len() {
        let r1 = draw();
        let r2 = draw();
        let v = config.inertia * velocity[d]
            + config.cognitive * r1 * (personal_best[d] - position[d])
            + config.social * r2 * (global_best[d] - position[d]);
        let vmax = config.bounds.width(d);
        velocity[d] = v.max(-vmax).min(vmax);
    }
}

pub fn run_pso<T, F>(objective: &ObjectiveSpec<F>, config: &PsoConfig<T>) -> Result<OptimizationTrace<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    config.validate()?;
    let sense = objective.sense;
    let dim = config.bounds.dim();
    let mut rng = seeded_rng(config.seed);
    let mut evaluator = Evaluator::new(objective, config.jobs)?;

    let mut positions: Vec<Vec<T>> = (0..config.population).map(|_| config.bounds.sample(&mut rng)).collect();
    let mut velocities = vec![vec![T::zero(); dim]; config.population];
    let refs: Vec<&[T]> = positions.iter().map(Vec::as_slice).collect();
    let mut fitness = evaluator.evaluate_all(&refs)?;
    let mut personal = positions.clone();
    let mut personal_fitness = fitness.clone();

    let mut elite = Elite::new(sense);
    elite.observe(positions.iter().map(Vec::as_slice).zip(fitness.iter().copied()));
    elite.record();
    let mut global = positions[best_index(&fitness, sense)].clone();

    for _ in 0..config.max_iterations {
        for i in 0..config.population {
            velocity_update(&mut velocities[i], &positions[i], &personal[i], &global, config, || {
                T::of(rng.gen::<f64>())
            });
            for (x, &v) in positions[i].iter_mut().zip(&velocities[i]) {
                *x += v;
            }
            config.bounds.clamp(&mut positions[i]);
        }
        let refs: Vec<&[T]> = positions.iter().map(Vec::as_slice).collect();
        fitness = evaluator.evaluate_all(&refs)?;
        for i in 0..config.population {
            if sense.is_better(fitness[i], personal_fitness[i]) {
                personal_fitness[i] = fitness[i];
                personal[i].clone_from(&positions[i]);
            }
        }
        elite.observe(positions.iter().map(Vec::as_slice).zip(fitness.iter().copied()));
        elite.record();
        global = personal[best_index(&personal_fitness, sense)].clone();
    }
    Ok(elite.into_trace(evaluator.evaluations()))
}

fn best_index<T: Scalar>(values: &[T], sense: super::Sense) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if sense.is_better(v, values[best]) {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn particle_at_best_with_zero_velocity_stays() {
        let b = BoundsBox::uniform(3, -1.0, 1.0).unwrap();
        let cfg = PsoConfig::new(4, 1, 0, b);
        let x = vec![0.2, -0.3, 0.4];
        let mut v = vec![0.0; 3];
        let mut rng = seeded_rng(9);
        velocity_update(&mut v, &x, &x, &x, &cfg, || rng.gen::<f64>());
        assert_eq!(v, vec![0.0; 3]);
    }

    #[test]
    fn velocity_is_clamped_to_box_width() {
        let b = BoundsBox::uniform(1, 0.0, 1.0).unwrap();
        let cfg = PsoConfig::new(2, 1, 0, b);
        let mut v = vec![10.0];
        velocity_update(&mut v, &[0.0], &[0.0], &[0.0], &cfg, || 0.0);
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn rejects_negative_constants() {
        let b = BoundsBox::uniform(1, 0.0, 1.0).unwrap();
        let mut cfg = PsoConfig::new(2, 1, 0, b);
        cfg.social = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deterministic_and_monotone() {
        let b = BoundsBox::uniform(4, -5.0, 5.0).unwrap();
        let obj = ObjectiveSpec::minimize(|x: &[f64]| x.iter().map(|v| v * v).sum::<f64>());
        let cfg = PsoConfig::new(10, 30, 42, b);
        let a = run_pso(&obj, &cfg).unwrap();
        let c = run_pso(&obj, &cfg.clone().with_jobs(3)).unwrap();
        assert_eq!(a, c);
        assert!(a.best_fitness_per_iteration.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(a.best_fitness_per_iteration.len(), 31);
    }
}
