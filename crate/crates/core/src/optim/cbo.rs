//! Colliding Bodies Optimization.
//!
//! Each iteration ranks the population best-first, splits it into a
//! stationary (better) half and a moving (worse) half, and lets moving body
//! `N/2 + k` collide with stationary body `k`. Post-collision velocities follow
//! one-dimensional collision laws weighted by fitness-derived masses and a
//! coefficient of restitution that decays linearly from 1 to 0.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::OptimizationTrace;
use super::{seeded_rng, validate_common, BoundsBox, Elite, Evaluator, ObjectiveSpec, Sense};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fitness magnitudes below this are clamped before taking reciprocals.
pub const MASS_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CboConfig<T> {
    pub population: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub bounds: BoundsBox<T>,
    /// Worker threads for objective evaluation (1 = inline, 0 = all cores).
    #[serde(default = "one")]
    pub jobs: usize,
}

fn one() -> usize {
    1
}

impl<T: Scalar> CboConfig<T> {
    pub fn new(population: usize, max_iterations: usize, seed: u64, bounds: BoundsBox<T>) -> Self {
        Self {
            population,
            max_iterations,
            seed,
            bounds,
            jobs: 1,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.population, self.max_iterations, &self.bounds)?;
        if self.population < 2 || !self.population.is_multiple_of(2) {
            return Err(Error::config(format!(
                "CBO population must be even and at least 2, got {}",
                self.population
            )));
        }
        Ok(())
    }
}

/// One candidate solution.
#[derive(Debug, Clone, PartialEq)]
pub struct CollidingBody<T> {
    pub position: Vec<T>,
    pub velocity: Vec<T>,
    pub mass: T,
    pub fitness: T,
}

/// Uniform random initial population with zero velocities and evaluated fitness.
pub fn initialize_population<T, F, R>(
    config: &CboConfig<T>,
    rng: &mut R,
    evaluator: &mut Evaluator<'_, T, F>,
) -> Result<Vec<CollidingBody<T>>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
    R: Rng,
{
    config.validate()?;
    let dim = config.bounds.dim();
    let positions: Vec<Vec<T>> = (0..config.population).map(|_| config.bounds.sample(rng)).collect();
    let refs: Vec<&[T]> = positions.iter().map(Vec::as_slice).collect();
    let fitness = evaluator.evaluate_all(&refs)?;
    Ok(positions
        .into_iter()
        .zip(fitness)
        .map(|(position, fitness)| CollidingBody {
            position,
            velocity: vec![T::zero(); dim],
            mass: T::zero(),
            fitness,
        })
        .collect())
}

/// Normalized masses for a fitness vector.
///
/// Minimization weighs each body by `1/f` (with `f` clamped to
/// [`MASS_EPSILON`]); maximization weighs by `f` itself, which is the same
/// formula after substituting `1/f` for the objective. A zero total under
/// maximization yields uniform masses.
pub fn masses_from_fitness<T: Scalar>(fitness: &[T], sense: Sense) -> Vec<T> {
    let n = fitness.len();
    if n == 0 {
        return Vec::new();
    }
    let delta = T::of(MASS_EPSILON);
    let weights: Vec<T> = match sense {
        Sense::Minimize => fitness.iter().map(|&f| T::one() / f.max(delta)).collect(),
        Sense::Maximize => fitness.iter().map(|&f| f.max(T::zero())).collect(),
    };
    let total: T = weights.iter().copied().sum();
    if !(total > T::zero()) || !total.is_finite() {
        return vec![T::one() / T::of_usize(n); n];
    }
    weights.into_iter().map(|w| w / total).collect()
}

pub fn compute_masses<T: Scalar>(bodies: &mut [CollidingBody<T>], sense: Sense) {
    let fitness: Vec<T> = bodies.iter().map(|b| b.fitness).collect();
    for (b, m) in bodies.iter_mut().zip(masses_from_fitness(&fitness, sense)) {
        b.mass = m;
    }
}

/// Stable best-first sort. Afterwards `bodies[..n/2]` is the stationary half
/// and `bodies[n/2 + k]` collides with `bodies[k]`.
pub fn sort_and_pair<T: Scalar>(bodies: &mut [CollidingBody<T>], sense: Sense) {
    bodies.sort_by(|a, b| sense.cmp_best_first(a.fitness, b.fitness));
}

/// Zero velocity for the stationary half, `X_m - X_s` for each moving body.
pub fn pre_collision_velocities<T: Scalar>(bodies: &mut [CollidingBody<T>]) {
    let half = bodies.len() / 2;
    let (stationary, moving) = bodies.split_at_mut(half);
    for s in stationary.iter_mut() {
        s.velocity.iter_mut().for_each(|v| *v = T::zero());
    }
    for (m, s) in moving.iter_mut().zip(stationary.iter()) {
        for ((v, &xm), &xs) in m.velocity.iter_mut().zip(&m.position).zip(&s.position) {
            *v = xm - xs;
        }
    }
}

/// Coefficient of restitution `1 - iteration / max_iterations`.
pub fn cor_schedule<T: Scalar>(iteration: usize, max_iterations: usize) -> Result<T> {
    if max_iterations == 0 {
        return Err(Error::config("max_iterations must be positive"));
    }
    if iteration > max_iterations {
        return Err(Error::config(format!(
            "iteration {iteration} exceeds max_iterations {max_iterations}"
        )));
    }
    Ok(T::one() - T::of_usize(iteration) / T::of_usize(max_iterations))
}

/// Velocity scale factors `(moving, stationary)` for one collision.
///
/// A moving body of mass `moving_mass` with velocity `v` hits a stationary
/// body of mass `stationary_mass`; the returned factors multiply `v`. The
/// pair conserves momentum for every `cor` and kinetic energy at `cor = 1`.
#[inline]
pub fn collision_factors<T: Scalar>(stationary_mass: T, moving_mass: T, cor: T) -> (T, T) {
    let total = moving_mass + stationary_mass;
    let moving = (moving_mass - cor * stationary_mass) / total;
    let stationary = (moving_mass + cor * moving_mass) / total;
    (moving, stationary)
}

/// Post-collision velocities `(moving_after, stationary_after)` for one pair.
pub fn collide<T: Scalar>(stationary_mass: T, moving_mass: T, moving_velocity: &[T], cor: T) -> (Vec<T>, Vec<T>) {
    let (fm, fs) = collision_factors(stationary_mass, moving_mass, cor);
    (
        moving_velocity.iter().map(|&v| fm * v).collect(),
        moving_velocity.iter().map(|&v| fs * v).collect(),
    )
}

/// Replaces every body's pre-collision velocity with its post-collision one.
pub fn post_collision_velocities<T: Scalar>(bodies: &mut [CollidingBody<T>], cor: T) {
    let half = bodies.len() / 2;
    let (stationary, moving) = bodies.split_at_mut(half);
    for (s, m) in stationary.iter_mut().zip(moving.iter_mut()) {
        let (fm, fs) = collision_factors(s.mass, m.mass, cor);
        // stationary bodies enter the collision at rest
        for (vs, vm) in s.velocity.iter_mut().zip(m.velocity.iter_mut()) {
            let incoming = *vm;
            *vm = fm * incoming;
            *vs = fs * incoming;
        }
    }
}

/// Moves every body by `r ∘ v'` with `r` uniform in `[-1, 1]` per component.
///
/// Moving bodies restart from their stationary partner's old position;
/// stationary bodies move from their own. Results are clamped to `bounds`.
pub fn update_positions<T: Scalar, R: Rng>(bodies: &mut [CollidingBody<T>], bounds: &BoundsBox<T>, rng: &mut R) {
    update_positions_with(bodies, bounds, || T::of(rng.gen_range(-1.0..=1.0)));
}

/// [`update_positions`] with an explicit source of the `[-1, 1]` factors,
/// drawn stationary half first, then moving half, component by component.
pub fn update_positions_with<T: Scalar>(
    bodies: &mut [CollidingBody<T>],
    bounds: &BoundsBox<T>,
    mut draw: impl FnMut() -> T,
) {
    let half = bodies.len() / 2;
    let (stationary, moving) = bodies.split_at_mut(half);
    let anchors: Vec<Vec<T>> = stationary.iter().map(|s| s.position.clone()).collect();
    for s in stationary.iter_mut() {
        for (x, &v) in s.position.iter_mut().zip(&s.velocity) {
            *x += draw() * v;
        }
        bounds.clamp(&mut s.position);
    }
    for (m, anchor) in moving.iter_mut().zip(&anchors) {
        for ((x, &v), &a) in m.position.iter_mut().zip(&m.velocity).zip(anchor) {
            *x = a + draw() * v;
        }
        bounds.clamp(&mut m.position);
    }
}

/// Runs CBO for `max_iterations` collision rounds.
pub fn run_cbo<T, F>(objective: &ObjectiveSpec<F>, config: &CboConfig<T>) -> Result<OptimizationTrace<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    config.validate()?;
    let sense = objective.sense;
    let mut rng = seeded_rng(config.seed);
    let mut evaluator = Evaluator::new(objective, config.jobs)?;
    let mut bodies = initialize_population(config, &mut rng, &mut evaluator)?;

    let mut elite = Elite::new(sense);
    elite.observe(bodies.iter().map(|b| (b.position.as_slice(), b.fitness)));
    elite.record();

    for iteration in 0..config.max_iterations {
        compute_masses(&mut bodies, sense);
        sort_and_pair(&mut bodies, sense);
        pre_collision_velocities(&mut bodies);
        // the restitution coefficient reaches 0 on the final round
        let cor = cor_schedule::<T>(iteration + 1, config.max_iterations)?;
        post_collision_velocities(&mut bodies, cor);
        update_positions(&mut bodies, &config.bounds, &mut rng);

        let refs: Vec<&[T]> = bodies.iter().map(|b| b.position.as_slice()).collect();
        let fitness = evaluator.evaluate_all(&refs)?;
        for (b, f) in bodies.iter_mut().zip(fitness) {
            b.fitness = f;
        }
        elite.observe(bodies.iter().map(|b| (b.position.as_slice(), b.fitness)));
        elite.record();
    }

    Ok(elite.into_trace(evaluator.evaluations()))
}
