//! Crayfish optimization algorithm (COA), maximizing a fitness over a box.
//!
//! Each iteration every crayfish draws its own temperature. Above 30 °C it
//! either retreats to the shade cave halfway between the global and current
//! best (summer resort) or fights another crayfish for it (competition).
//! At or below 30 °C it forages around the global best, scaled by the
//! temperature-dependent intake `p`.
//!
//! Randomness comes from one ChaCha stream per (iteration, crayfish), so the
//! outcome depends only on the seed, never on how fitness calls are scheduled.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Temperature above which crayfish stop foraging.
pub const FORAGING_LIMIT_C: f64 = 30.0;

const FOOD_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoaConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
    /// `C1`, scales the intake curve.
    pub intake_coeff: f64,
    /// `C3`, the food-size factor.
    pub food_factor: f64,
    /// Optimal temperature `mu` in °C.
    pub temp_mu: f64,
    /// Spread of the intake curve in °C.
    pub temp_sigma: f64,
    pub rng_seed: u64,
}

impl CoaConfig {
    /// Defaults for every coefficient; only the box and budget are required.
    pub fn new(
        population_size: usize,
        max_iterations: usize,
        lower_bounds: Vec<f64>,
        upper_bounds: Vec<f64>,
        rng_seed: u64,
    ) -> Self {
        CoaConfig {
            population_size,
            max_iterations,
            lower_bounds,
            upper_bounds,
            intake_coeff: 0.2,
            food_factor: 3.0,
            temp_mu: 25.0,
            temp_sigma: 3.0,
            rng_seed,
        }
    }

    pub fn dimensions(&self) -> usize {
        self.lower_bounds.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::config("population size must be at least 4"));
        }
        if self.max_iterations == 0 {
            return Err(Error::config("at least one iteration is required"));
        }
        if self.lower_bounds.is_empty() || self.lower_bounds.len() != self.upper_bounds.len() {
            return Err(Error::config("bounds must be non-empty and of equal length"));
        }
        for (j, (lo, hi)) in self.lower_bounds.iter().zip(&self.upper_bounds).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "dimension {j}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        for (name, v) in [
            ("intake_coeff", self.intake_coeff),
            ("food_factor", self.food_factor),
            ("temp_mu", self.temp_mu),
            ("temp_sigma", self.temp_sigma),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be finite and positive")));
            }
        }
        Ok(())
    }

    fn clamp(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower_bounds).zip(&self.upper_bounds) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Current crayfish positions and the best point seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub positions: Vec<Vec<f64>>,
    pub fitnesses: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Number of completed update steps.
    pub iteration: usize,
    /// Fitness calls made so far, including any made by hooks.
    pub evaluations: usize,
}

impl Population {
    /// Index of the best crayfish in the current population.
    pub fn current_best(&self) -> usize {
        argmax(&self.fitnesses)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Best-so-far fitness after each iteration.
    pub fitness_history: Vec<f64>,
    pub evaluations: usize,
}

/// What an iteration hook did to the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HookOutcome {
    Unchanged,
    /// The objective changed; the incumbent was re-scored to `best_fitness`
    /// using `evaluations` extra fitness calls.
    Rescored { best_fitness: f64, evaluations: usize },
}

fn sanitize(f: f64) -> f64 {
    if f.is_finite() {
        f
    } else {
        f64::NEG_INFINITY
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Stream of random numbers for one crayfish at one iteration.
fn crayfish_rng(seed: u64, iteration: usize, crayfish: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((iteration as u64) << 32) | crayfish as u64);
    rng
}

/// Ambient temperature `rand * 15 + 20`, in `[20, 35]` °C.
pub fn temperature<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    temperature_from_uniform(rng.random::<f64>())
}

pub fn temperature_from_uniform(u: f64) -> f64 {
    u * 15.0 + 20.0
}

/// Food intake `C1 / (sqrt(2 pi) sigma) * exp(-(temp - mu)^2 / (2 sigma^2))`.
pub fn intake_probability(temp: f64, config: &CoaConfig) -> f64 {
    let s = config.temp_sigma;
    let d = temp - config.temp_mu;
    config.intake_coeff / ((2.0 * PI).sqrt() * s) * (-(d * d) / (2.0 * s * s)).exp()
}

/// Decreasing coefficient `C2 = 2 - t / T`.
pub fn c2(t: usize, max_iterations: usize) -> f64 {
    2.0 - t as f64 / max_iterations as f64
}

/// Opponent index from a uniform draw: `round(u (N - 1)) + 1`, one-based.
pub fn competitor_index(u: f64, population_size: usize) -> usize {
    (u * (population_size - 1) as f64).round() as usize + 1
}

/// Ranks with the worst fitness at 1 and the best at N; ties by index.
fn ranks(fitnesses: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| fitnesses[a].total_cmp(&fitnesses[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; fitnesses.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = (r + 1) as f64;
    }
    ranks
}

fn evaluate_all<F>(positions: &[Vec<f64>], fitness: &F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    positions.par_iter().map(|x| sanitize(fitness(x))).collect()
}

/// Uniform random population inside the box, evaluated.
pub fn initialize<F>(config: &CoaConfig, fitness: &F) -> Result<Population>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let dim = config.dimensions();
    let positions: Vec<Vec<f64>> = (0..config.population_size)
        .map(|i| {
            let mut rng = crayfish_rng(config.rng_seed, 0, i);
            let mut x: Vec<f64> = (0..dim)
                .map(|j| {
                    let (lo, hi) = (config.lower_bounds[j], config.upper_bounds[j]);
                    lo + (hi - lo) * rng.random::<f64>()
                })
                .collect();
            config.clamp(&mut x);
            x
        })
        .collect();
    let fitnesses = evaluate_all(&positions, fitness);
    if fitnesses.iter().all(|f| *f == f64::NEG_INFINITY) {
        return Err(Error::Initialization(
            "fitness is non-finite for every initial candidate".into(),
        ));
    }
    let best = argmax(&fitnesses);
    Ok(Population {
        best_position: positions[best].clone(),
        best_fitness: fitnesses[best],
        evaluations: positions.len(),
        positions,
        fitnesses,
        iteration: 0,
    })
}

/// Temperature draws may be overridden, which tests use to pin a branch.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepOptions {
    pub fixed_temperature: Option<f64>,
}

/// One COA update of every crayfish followed by re-evaluation.
pub fn step<F>(pop: &Population, fitness: &F, config: &CoaConfig) -> Result<Population>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    step_with(pop, fitness, config, StepOptions::default())
}

pub fn step_with<F>(
    pop: &Population,
    fitness: &F,
    config: &CoaConfig,
    options: StepOptions,
) -> Result<Population>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if pop.iteration >= config.max_iterations {
        return Err(Error::config("population already ran the full iteration budget"));
    }
    let n = config.population_size;
    let dim = config.dimensions();
    let t = pop.iteration + 1;
    let c2 = c2(t, config.max_iterations);
    let global_best = &pop.best_position;
    let local_best = &pop.positions[pop.current_best()];
    let shade: Vec<f64> = global_best
        .iter()
        .zip(local_best)
        .map(|(g, l)| 0.5 * (g + l))
        .collect();
    let ranks = ranks(&pop.fitnesses);
    let food_rank = n as f64;

    let positions: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut rng = crayfish_rng(config.rng_seed, t, i);
            let x = &pop.positions[i];
            let temp = match options.fixed_temperature {
                Some(v) => v,
                None => temperature(&mut rng),
            };
            let mut next = if temp > FORAGING_LIMIT_C {
                if rng.random::<f64>() < 0.5 {
                    // Summer resort.
                    (0..dim)
                        .map(|j| x[j] + c2 * rng.random::<f64>() * (shade[j] - x[j]))
                        .collect::<Vec<_>>()
                } else {
                    // Competition.
                    (0..dim)
                        .map(|j| {
                            let z = competitor_index(rng.random::<f64>(), n) - 1;
                            x[j] - pop.positions[z][j] + shade[j]
                        })
                        .collect()
                }
            } else {
                // Foraging.
                let p = intake_probability(temp, config);
                let q = config.food_factor * food_rank / ranks[i].max(FOOD_EPSILON);
                if q > (config.food_factor + 1.0) / 2.0 {
                    let shrink = (-1.0 / q).exp();
                    (0..dim)
                        .map(|j| {
                            let food = global_best[j] * shrink;
                            let a = (2.0 * PI * rng.random::<f64>()).cos();
                            let b = (2.0 * PI * rng.random::<f64>()).sin();
                            x[j] + food * p * (a - b)
                        })
                        .collect()
                } else {
                    (0..dim)
                        .map(|j| (x[j] - global_best[j]) * p + p * rng.random::<f64>() * x[j])
                        .collect()
                }
            };
            config.clamp(&mut next);
            next
        })
        .collect();

    let fitnesses = evaluate_all(&positions, fitness);
    let mut best_position = pop.best_position.clone();
    let mut best_fitness = pop.best_fitness;
    let i = argmax(&fitnesses);
    if fitnesses[i] > best_fitness {
        best_fitness = fitnesses[i];
        best_position = positions[i].clone();
    }
    Ok(Population {
        evaluations: pop.evaluations + n,
        positions,
        fitnesses,
        best_position,
        best_fitness,
        iteration: t,
    })
}

/// Runs initialization and `max_iterations` steps, calling `hook` with the
/// population after every step.
pub fn optimize<F, H>(config: &CoaConfig, fitness: &F, mut hook: H) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
    H: FnMut(&Population) -> HookOutcome,
{
    let mut pop = initialize(config, fitness)?;
    let mut history = Vec::with_capacity(config.max_iterations);
    for _ in 0..config.max_iterations {
        pop = step(&pop, fitness, config)?;
        if let HookOutcome::Rescored {
            best_fitness,
            evaluations,
        } = hook(&pop)
        {
            pop.best_fitness = best_fitness;
            pop.evaluations += evaluations;
        }
        history.push(pop.best_fitness);
    }
    Ok(OptimizationResult {
        best_position: pop.best_position,
        best_fitness: pop.best_fitness,
        fitness_history: history,
        evaluations: pop.evaluations,
    })
}

/// [`optimize`] without a hook.
pub fn maximize<F>(config: &CoaConfig, fitness: &F) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    optimize(config, fitness, |_| HookOutcome::Unchanged)
}
