//! Experiment drivers: single seeded runs and the full
//! selection x initialization x crossover matrix, plus their CSV/JSON
//! artifacts.

use std::io::Write;

use serde::Serialize;

use crate::course::{Course, LearningPath};
use crate::ga::{evolve, Crossover, GaConfig, GaError, InitMethod, RunResult, Selection};
use crate::par::Execution;
use crate::rng;
use crate::seeding::seed_population;

/// Seeds the population from the seeding stream of `config.rng_seed`, then
/// evolves it.
pub fn run_once(course: &Course, config: &GaConfig) -> Result<RunResult, GaError> {
    let population = seed_population(course, config, &mut rng::seeding_rng(config.rng_seed))?;
    evolve(course, config, population)
}

/// One seed per job, same configuration otherwise.
pub fn run_seeds(course: &Course, config: &GaConfig, seeds: &[u64], exec: Execution) -> Result<Vec<RunResult>, GaError> {
    exec.map(seeds.len(), |i| {
        let cfg = GaConfig {
            rng_seed: seeds[i],
            ..config.clone()
        };
        run_once(course, &cfg)
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cell {
    pub selection: Selection,
    pub init: InitMethod,
    pub crossover: Crossover,
}

impl Cell {
    pub fn apply(&self, base: &GaConfig) -> GaConfig {
        GaConfig {
            selection: self.selection,
            init: self.init,
            crossover: self.crossover,
            ..base.clone()
        }
    }
}

/// All 12 combinations, selection outermost and crossover innermost.
pub fn matrix_cells() -> Vec<Cell> {
    let mut cells = Vec::with_capacity(12);
    for selection in Selection::ALL {
        for init in InitMethod::ALL {
            for crossover in Crossover::ALL {
                cells.push(Cell {
                    selection,
                    init,
                    crossover,
                });
            }
        }
    }
    cells
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeededRun {
    pub seed: u64,
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixRow {
    pub cell: Cell,
    pub runs: Vec<SeededRun>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

impl MatrixRow {
    /// Run with the highest last fitness; the earliest seed wins ties.
    pub fn best_run(&self) -> &SeededRun {
        let mut best = &self.runs[0];
        for run in &self.runs[1..] {
            if run.result.last_fitness > best.result.last_fitness {
                best = run;
            }
        }
        best
    }

    pub fn first_fitness_mean(&self) -> f64 {
        mean(self.runs.iter().map(|r| r.result.first_fitness))
    }

    pub fn last_fitness_mean(&self) -> f64 {
        mean(self.runs.iter().map(|r| r.result.last_fitness))
    }

    /// Sample standard deviation of last fitness; 0 for a single run.
    pub fn last_fitness_stddev(&self) -> f64 {
        let n = self.runs.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.last_fitness_mean();
        let ss: f64 = self.runs.iter().map(|r| (r.result.last_fitness - m).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixReport {
    pub rows: Vec<MatrixRow>,
}

pub const MATRIX_HEADER: [&str; 11] = [
    "selection",
    "init",
    "crossover",
    "seed",
    "first_fitness",
    "last_fitness",
    "best_path",
    "repeats",
    "first_fitness_mean",
    "last_fitness_mean",
    "last_fitness_stddev",
];

impl MatrixReport {
    /// One row per cell. The seed, first/last fitness and path columns come
    /// from the cell's best run; the trailing columns aggregate all repeats.
    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(MATRIX_HEADER)?;
        for row in &self.rows {
            let best = row.best_run();
            w.write_record([
                row.cell.selection.to_string(),
                row.cell.init.to_string(),
                row.cell.crossover.to_string(),
                best.seed.to_string(),
                format!("{:.2}", best.result.first_fitness),
                format!("{:.2}", best.result.last_fitness),
                best.result.best_path.to_string(),
                row.runs.len().to_string(),
                format!("{:.4}", row.first_fitness_mean()),
                format!("{:.4}", row.last_fitness_mean()),
                format!("{:.4}", row.last_fitness_stddev()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs every cell of the matrix once per seed. Jobs are independent and
/// may run concurrently; the report is ordered by (cell, seed) either way.
pub fn run_matrix(course: &Course, base: &GaConfig, seeds: &[u64], exec: Execution) -> Result<MatrixReport, GaError> {
    assert!(!seeds.is_empty(), "at least one seed");
    let cells = matrix_cells();
    let per_cell = seeds.len();
    let results = exec.map(cells.len() * per_cell, |job| {
        let cfg = GaConfig {
            rng_seed: seeds[job % per_cell],
            ..cells[job / per_cell].apply(base)
        };
        run_once(course, &cfg)
    });
    let mut results = results.into_iter();
    let mut rows = Vec::with_capacity(cells.len());
    for cell in cells {
        let mut runs = Vec::with_capacity(per_cell);
        for &seed in seeds {
            let result = results.next().expect("one result per job")?;
            runs.push(SeededRun { seed, result });
        }
        rows.push(MatrixRow { cell, runs });
    }
    Ok(MatrixReport { rows })
}

/// `generation,best_fitness,mean_fitness`, one row per generation.
pub fn write_convergence_csv(result: &RunResult, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["generation", "best_fitness", "mean_fitness"])?;
    for g in &result.convergence {
        w.write_record([g.generation.to_string(), g.best_fitness.to_string(), g.mean_fitness.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Self-describing run artifact: the full configuration next to its result.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport<'a> {
    pub config: &'a GaConfig,
    pub concept_count: usize,
    pub traditional_path: LearningPath,
    pub traditional_fitness: f64,
    pub result: &'a RunResult,
}
