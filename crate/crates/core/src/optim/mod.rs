//! Population-based continuous optimizers behind a shared objective interface.
//!
//! Every optimizer draws its randomness on the calling thread from a
//! `ChaCha8Rng` seeded with the configured seed. Objective evaluations for a
//! whole population may be fanned out to a worker pool ([`Evaluator`]), which
//! never changes the result because evaluation is pure.

pub mod bench;
pub mod cbo;
pub mod firefly;
pub mod pso;
pub mod random;

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use cbo::{run_cbo, CboConfig, CollidingBody};
pub use firefly::{run_firefly, FfConfig};
pub use pso::{run_pso, PsoConfig};
pub use random::{run_random_search, RandomSearchConfig};

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// `true` when `a` is strictly better than `b`.
    #[inline]
    pub fn is_better<T: Scalar>(self, a: T, b: T) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }

    /// Ordering that places better values first.
    pub fn cmp_best_first<T: Scalar>(self, a: T, b: T) -> Ordering {
        let ord = a.partial_cmp(&b).unwrap_or(Ordering::Equal);
        match self {
            Sense::Minimize => ord,
            Sense::Maximize => ord.reverse(),
        }
    }
}

/// Axis-aligned search box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsBox<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> BoundsBox<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::config("bounds must have at least one dimension"));
        }
        if lower.len() != upper.len() {
            return Err(Error::config(format!(
                "bounds length mismatch: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "dimension {d}: lower bound {lo} must be finite and below upper bound {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval on every dimension.
    pub fn uniform(dim: usize, lower: T, upper: T) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    #[inline]
    pub fn width(&self, d: usize) -> T {
        self.upper[d] - self.lower[d]
    }

    /// Uniform sample, one independent draw per component.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<T> {
        (0..self.dim())
            .map(|d| {
                let u = T::of(rng.gen::<f64>());
                // the product can round past the upper edge for narrow boxes
                (self.lower[d] + u * self.width(d)).min(self.upper[d])
            })
            .collect()
    }

    pub fn clamp(&self, x: &mut [T]) {
        for (d, v) in x.iter_mut().enumerate() {
            *v = v.max(self.lower[d]).min(self.upper[d]);
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(d, &v)| v >= self.lower[d] && v <= self.upper[d])
    }
}

/// An objective function together with its optimization sense.
///
/// `evaluate` must be pure: the optimizers may call it from worker threads
/// and rely on identical positions producing identical values.
#[derive(Debug, Clone, Copy)]
pub struct ObjectiveSpec<F> {
    pub evaluate: F,
    pub sense: Sense,
}

impl<F> ObjectiveSpec<F> {
    pub fn minimize(evaluate: F) -> Self {
        Self {
            evaluate,
            sense: Sense::Minimize,
        }
    }

    pub fn maximize(evaluate: F) -> Self {
        Self {
            evaluate,
            sense: Sense::Maximize,
        }
    }
}

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace<T> {
    /// Best-so-far fitness; entry 0 is the initial population, entry `k` is
    /// after iteration `k`.
    pub best_fitness_per_iteration: Vec<T>,
    pub best_position: Vec<T>,
    pub best_fitness: T,
    /// Number of objective calls.
    pub evaluations: usize,
}

/// Evaluates batches of positions, optionally on a dedicated thread pool.
pub struct Evaluator<'a, T, F> {
    objective: &'a ObjectiveSpec<F>,
    pool: Option<rayon::ThreadPool>,
    evaluations: usize,
    _scalar: std::marker::PhantomData<T>,
}

impl<'a, T, F> Evaluator<'a, T, F>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    /// `jobs == 1` evaluates inline; `jobs == 0` uses the machine parallelism.
    pub fn new(objective: &'a ObjectiveSpec<F>, jobs: usize) -> Result<Self> {
        let pool = if jobs == 1 {
            None
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::config(format!("cannot build worker pool: {e}")))?;
            Some(pool)
        };
        Ok(Self {
            objective,
            pool,
            evaluations: 0,
            _scalar: std::marker::PhantomData,
        })
    }

    pub fn sense(&self) -> Sense {
        self.objective.sense
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn evaluate(&mut self, position: &[T]) -> Result<T> {
        self.evaluations += 1;
        check_finite((self.objective.evaluate)(position), position)
    }

    /// Evaluates every position; results are in input order.
    pub fn evaluate_all(&mut self, positions: &[&[T]]) -> Result<Vec<T>> {
        self.evaluations += positions.len();
        let f = &self.objective.evaluate;
        let values: Vec<T> = match &self.pool {
            None => positions.iter().map(|p| f(p)).collect(),
            Some(pool) => pool.install(|| positions.par_iter().map(|p| f(p)).collect()),
        };
        values
            .into_iter()
            .zip(positions)
            .map(|(v, p)| check_finite(v, p))
            .collect()
    }
}

fn check_finite<T: Scalar>(value: T, position: &[T]) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteObjective {
            value: value.as_f64(),
            position: position.iter().map(|v| v.as_f64()).collect(),
        })
    }
}

/// Global best-so-far record kept outside the population.
#[derive(Debug, Clone)]
pub(crate) struct Elite<T> {
    sense: Sense,
    position: Vec<T>,
    fitness: Option<T>,
    history: Vec<T>,
}

impl<T: Scalar> Elite<T> {
    pub(crate) fn new(sense: Sense) -> Self {
        Self {
            sense,
            position: Vec::new(),
            fitness: None,
            history: Vec::new(),
        }
    }

    /// Offers a batch; the first strictly better entry in index order wins ties.
    pub(crate) fn observe<'p, I>(&mut self, candidates: I)
    where
        I: IntoIterator<Item = (&'p [T], T)>,
    {
        for (pos, f) in candidates {
            let replace = match self.fitness {
                None => true,
                Some(best) => self.sense.is_better(f, best),
            };
            if replace {
                self.fitness = Some(f);
                self.position.clear();
                self.position.extend_from_slice(pos);
            }
        }
    }

    pub(crate) fn record(&mut self) {
        if let Some(f) = self.fitness {
            self.history.push(f);
        }
    }

    pub(crate) fn into_trace(self, evaluations: usize) -> OptimizationTrace<T> {
        OptimizationTrace {
            best_fitness_per_iteration: self.history,
            best_position: self.position,
            best_fitness: self.fitness.unwrap_or_else(T::nan),
            evaluations,
        }
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn validate_common<T: Scalar>(
    population: usize,
    max_iterations: usize,
    bounds: &BoundsBox<T>,
) -> Result<()> {
    if population == 0 {
        return Err(Error::config("population must be positive"));
    }
    if max_iterations == 0 {
        return Err(Error::config("max_iterations must be positive"));
    }
    if bounds.dim() == 0 {
        return Err(Error::config("bounds must have at least one dimension"));
    }
    Ok(())
}
