//! Genetic operators and the generational loop.

mod engine;
mod operators;
mod selection;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::course::{Course, LearningPath};
use crate::fitness::{self, FitnessError, FitnessParams, FitnessScore};
use crate::seeding::SaSchedule;

pub use engine::{evolve, GenerationStats, RunResult};
pub use operators::{cycle_crossover, cycle_crossover_slices, pmx_crossover, pmx_crossover_slices, pmx_with_cuts, swap_mutate, swap_positions};
pub use selection::{roulette_select, tournament_select};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("seed population has {found} individuals, configuration expects {expected}")]
    PopulationSizeMismatch { expected: usize, found: usize },
    #[error("tournament size {k} outside 1..={population}")]
    TournamentSize { k: usize, population: usize },
    #[error("population is empty")]
    EmptyPopulation,
    #[error("roulette selection needs non-negative fitness, individual {index} has {value}")]
    NegativeFitness { index: usize, value: f64 },
    #[error("roulette selection needs a positive total fitness")]
    TotalFitnessZero,
    #[error("swap mutation needs at least 2 concepts, path has {0}")]
    PathTooShort(usize),
    #[error("parents differ in length ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("parents are not permutations of the same elements")]
    ForeignGene,
    #[error(transparent)]
    Fitness(#[from] FitnessError),
}

macro_rules! cli_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text,)+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown {} {other:?} (expected {})",
                        stringify!($name),
                        [$($text),+].join("|")
                    )),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    #[default]
    Tournament,
    Roulette,
}

impl Selection {
    pub const ALL: [Selection; 2] = [Selection::Tournament, Selection::Roulette];
}

cli_enum!(Selection { Tournament => "tournament", Roulette => "roulette" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossover {
    Pmx,
    #[default]
    Cycle,
}

impl Crossover {
    pub const ALL: [Crossover; 2] = [Crossover::Pmx, Crossover::Cycle];
}

cli_enum!(Crossover { Pmx => "pmx", Cycle => "cycle" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMethod {
    #[default]
    Random,
    HillClimbing,
    SimulatedAnnealing,
}

impl InitMethod {
    pub const ALL: [InitMethod; 3] = [InitMethod::Random, InitMethod::HillClimbing, InitMethod::SimulatedAnnealing];
}

cli_enum!(InitMethod { Random => "random", HillClimbing => "hc", SimulatedAnnealing => "sa" });

pub const DEFAULT_POPULATION_SIZE: usize = 100;
pub const DEFAULT_GENERATIONS: usize = 150;
pub const DEFAULT_TOURNAMENT_SIZE: usize = 5;
pub const DEFAULT_CROSSOVER_RATE: f64 = 0.9;
pub const DEFAULT_MUTATION_RATE: f64 = 1.0;
pub const DEFAULT_ELITISM: usize = 1;
pub const DEFAULT_HC_ITERATIONS: usize = 100;

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub selection: Selection,
    pub tournament_size: usize,
    pub crossover: Crossover,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elitism_count: usize,
    pub init: InitMethod,
    /// Hill-climbing steps per seeded individual.
    pub hc_iterations: usize,
    pub sa_schedule: SaSchedule,
    pub rng_seed: u64,
    pub fitness_params: FitnessParams,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: DEFAULT_POPULATION_SIZE,
            generations: DEFAULT_GENERATIONS,
            selection: Selection::default(),
            tournament_size: DEFAULT_TOURNAMENT_SIZE,
            crossover: Crossover::default(),
            crossover_rate: DEFAULT_CROSSOVER_RATE,
            mutation_rate: DEFAULT_MUTATION_RATE,
            elitism_count: DEFAULT_ELITISM,
            init: InitMethod::default(),
            hc_iterations: DEFAULT_HC_ITERATIONS,
            sa_schedule: SaSchedule::default(),
            rng_seed: 0,
            fitness_params: FitnessParams::default(),
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |msg: String| Err(GaError::InvalidConfig(msg));
        if self.population_size == 0 {
            return bad("population size must be positive".into());
        }
        if self.generations == 0 {
            return bad("generations must be positive".into());
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return Err(GaError::TournamentSize {
                k: self.tournament_size,
                population: self.population_size,
            });
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!("crossover rate {} outside [0, 1]", self.crossover_rate));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad(format!("mutation rate {} outside [0, 1]", self.mutation_rate));
        }
        if self.elitism_count >= self.population_size {
            return bad(format!(
                "elitism {} must be below population size {}",
                self.elitism_count, self.population_size
            ));
        }
        if self.hc_iterations == 0 {
            return bad("hill-climbing iterations must be positive".into());
        }
        self.sa_schedule.validate().map_err(|e| GaError::InvalidConfig(e.to_string()))?;
        FitnessParams::new(self.fitness_params.w(), self.fitness_params.variant())?;
        Ok(())
    }
}

/// A path with its cached fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub path: LearningPath,
    pub fitness: FitnessScore,
}

impl Individual {
    pub fn evaluated(path: LearningPath, course: &Course, params: &FitnessParams) -> Result<Self, FitnessError> {
        let fitness = fitness::evaluate(&path, course, params)?;
        Ok(Self { path, fitness })
    }

    /// For paths produced by closed operators on valid parents.
    pub(crate) fn evaluated_unchecked(path: LearningPath, course: &Course, params: &FitnessParams) -> Self {
        let fitness = FitnessScore::new(fitness::path_value(path.as_slice(), course, params));
        Self { path, fitness }
    }

    pub fn value(&self) -> f64 {
        self.fitness.value
    }
}
