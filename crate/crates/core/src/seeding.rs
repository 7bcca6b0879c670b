//! Initial populations: uniform random, hill climbing, simulated annealing.
//!
//! Both local searches move through the single-swap neighborhood, the same
//! move the mutation operator makes.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::course::{Course, LearningPath};
use crate::fitness::{path_value, FitnessParams};
use crate::ga::{swap_positions, GaConfig, GaError, Individual, InitMethod};

pub const DEFAULT_INITIAL_TEMPERATURE: f64 = 10.0;
pub const DEFAULT_COOLING_FACTOR: f64 = 0.95;
pub const DEFAULT_SA_STEPS: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeedingError {
    #[error("temperature must be > 0, got {0}")]
    NonPositiveTemperature(f64),
    #[error("cooling factor must lie in (0, 1), got {0}")]
    CoolingFactor(f64),
    #[error("annealing needs at least one step per seed")]
    NoSteps,
}

/// Geometric cooling: `T_{t+1} = cooling_factor * T_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaSchedule {
    pub initial_temperature: f64,
    pub cooling_factor: f64,
    pub steps_per_seed: usize,
}

impl Default for SaSchedule {
    fn default() -> Self {
        Self {
            initial_temperature: DEFAULT_INITIAL_TEMPERATURE,
            cooling_factor: DEFAULT_COOLING_FACTOR,
            steps_per_seed: DEFAULT_SA_STEPS,
        }
    }
}

impl SaSchedule {
    pub fn new(initial_temperature: f64, cooling_factor: f64, steps_per_seed: usize) -> Result<Self, SeedingError> {
        let s = Self {
            initial_temperature,
            cooling_factor,
            steps_per_seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SeedingError> {
        if !(self.initial_temperature > 0.0) || !self.initial_temperature.is_finite() {
            return Err(SeedingError::NonPositiveTemperature(self.initial_temperature));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(SeedingError::CoolingFactor(self.cooling_factor));
        }
        if self.steps_per_seed == 0 {
            return Err(SeedingError::NoSteps);
        }
        Ok(())
    }

    /// Temperature before step `t` (0-based).
    pub fn temperature(&self, t: usize) -> f64 {
        self.initial_temperature * self.cooling_factor.powi(t as i32)
    }
}

fn random_sequence<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    seq
}

/// `size` independent uniform permutations of `0..n`.
pub fn random_population<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Vec<LearningPath> {
    (0..size)
        .map(|_| LearningPath::from_vec_unchecked(random_sequence(n, rng)))
        .collect()
}

/// Starts from a random permutation and, for `iterations` steps, moves to a
/// random swap neighbor only when it is strictly fitter.
pub fn hill_climb_seed<R: Rng + ?Sized>(course: &Course, params: &FitnessParams, iterations: usize, rng: &mut R) -> LearningPath {
    hill_climb(course, params, iterations, rng).1
}

fn hill_climb<R: Rng + ?Sized>(course: &Course, params: &FitnessParams, iterations: usize, rng: &mut R) -> (f64, LearningPath) {
    let n = course.len();
    let mut current = random_sequence(n, rng);
    let mut value = path_value(&current, course, params);
    if n >= 2 {
        for _ in 0..iterations {
            let (i, j) = swap_positions(n, rng);
            current.swap(i, j);
            let candidate = path_value(&current, course, params);
            if candidate > value {
                value = candidate;
            } else {
                current.swap(i, j);
            }
        }
    }
    (value, LearningPath::from_vec_unchecked(current))
}

/// Chance of moving from fitness `current` to `candidate` at temperature
/// `temperature`, for a maximized objective: `1` when `candidate >= current`,
/// otherwise `exp((candidate - current) / temperature)`.
pub fn accept_probability(current: f64, candidate: f64, temperature: f64) -> Result<f64, SeedingError> {
    if !(temperature > 0.0) {
        return Err(SeedingError::NonPositiveTemperature(temperature));
    }
    if candidate >= current {
        return Ok(1.0);
    }
    Ok(((candidate - current) / temperature).exp())
}

/// Random start, then `steps_per_seed` annealing moves over swap neighbors
/// with geometric cooling. Returns the best path seen along the way.
pub fn simulated_annealing_seed<R: Rng + ?Sized>(
    course: &Course,
    params: &FitnessParams,
    schedule: &SaSchedule,
    rng: &mut R,
) -> Result<LearningPath, SeedingError> {
    Ok(anneal(course, params, schedule, rng)?.1)
}

fn anneal<R: Rng + ?Sized>(
    course: &Course,
    params: &FitnessParams,
    schedule: &SaSchedule,
    rng: &mut R,
) -> Result<(f64, LearningPath), SeedingError> {
    schedule.validate()?;
    let n = course.len();
    let mut current = random_sequence(n, rng);
    let mut value = path_value(&current, course, params);
    let mut best = (value, current.clone());
    if n < 2 {
        return Ok((best.0, LearningPath::from_vec_unchecked(best.1)));
    }
    let mut temperature = schedule.initial_temperature;
    for _ in 0..schedule.steps_per_seed {
        let (i, j) = swap_positions(n, rng);
        current.swap(i, j);
        let candidate = path_value(&current, course, params);
        let p = accept_probability(value, candidate, temperature)?;
        if p >= 1.0 || rng.gen::<f64>() < p {
            value = candidate;
            if value > best.0 {
                best = (value, current.clone());
            }
        } else {
            current.swap(i, j);
        }
        // Underflow to zero would make the next acceptance query invalid.
        temperature = (temperature * schedule.cooling_factor).max(f64::MIN_POSITIVE);
    }
    Ok((best.0, LearningPath::from_vec_unchecked(best.1)))
}

/// Builds and evaluates the initial population described by `config`.
/// Hill climbing and annealing run once per slot, each from its own random
/// start.
pub fn seed_population<R: Rng + ?Sized>(course: &Course, config: &GaConfig, rng: &mut R) -> Result<Vec<Individual>, GaError> {
    config.validate()?;
    let params = &config.fitness_params;
    let size = config.population_size;
    let paths = match config.init {
        InitMethod::Random => random_population(course.len(), size, rng),
        InitMethod::HillClimbing => (0..size)
            .map(|_| hill_climb_seed(course, params, config.hc_iterations, rng))
            .collect(),
        InitMethod::SimulatedAnnealing => (0..size)
            .map(|_| simulated_annealing_seed(course, params, &config.sa_schedule, rng))
            .collect::<Result<_, _>>()
            .map_err(|e| GaError::InvalidConfig(e.to_string()))?,
    };
    Ok(paths
        .into_iter()
        .map(|p| Individual::evaluated_unchecked(p, course, params))
        .collect())
}
