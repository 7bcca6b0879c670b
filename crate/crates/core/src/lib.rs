//! Learning path sequencing with a permutation genetic algorithm.
//!
//! A course is a set of concepts (difficulty, duration, rating) plus a matrix
//! of pairwise relation degrees. A learning path is an ordering of every
//! concept; [`fitness`] scores it, [`ga`] evolves a population of paths,
//! [`seeding`] builds the initial population (random, hill climbing or
//! simulated annealing) and [`oracle`] finds the exact optimum of small
//! courses by enumeration. [`experiment`] drives single runs and the full
//! operator matrix; [`cli`] is the `pathga` binary.
//!
//! Independent runs fan out through [`par::Execution`]; with the `parallel`
//! feature disabled everything runs on the calling thread with identical
//! results.

pub mod cli;
pub mod course;
pub mod experiment;
pub mod fitness;
pub mod ga;
pub mod oracle;
pub mod par;
pub mod rng;
pub mod seeding;

pub use course::{Concept, Course, CourseError, LearningPath, PathError, RelationDegreeMatrix};
pub use fitness::{evaluate, FitnessParams, FitnessScore, FitnessVariant};
pub use ga::{evolve, GaConfig, GaError, Individual, RunResult};
pub use oracle::{exhaustive_best, OracleResult};
pub use par::Execution;
