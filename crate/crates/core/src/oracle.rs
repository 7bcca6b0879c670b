//! Exhaustive search over every ordering of a small course.
//!
//! Used as ground truth for the GA. Scores come only from
//! [`fitness::evaluate_sequence`](crate::fitness::evaluate_sequence).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::course::{Course, LearningPath};
use crate::fitness::{evaluate_sequence, FitnessError, FitnessParams};
use crate::par::Execution;

pub const MAX_CONCEPTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("course has {0} concepts; exhaustive search is limited to {MAX_CONCEPTS}")]
    CourseTooLarge(usize),
    #[error(transparent)]
    Fitness(#[from] FitnessError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_path: LearningPath,
    pub best_fitness: f64,
    pub evaluated_count: u64,
}

/// Advances `seq` to the next permutation in lexicographic order; false at
/// the last one.
fn next_permutation(seq: &mut [usize]) -> bool {
    let Some(i) = seq.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = seq.iter().rposition(|&v| v > seq[i]).expect("pivot has a successor");
    seq.swap(i, j);
    seq[i + 1..].reverse();
    true
}

/// Best over all permutations starting with `first`, visited in
/// lexicographic order; first maximum wins.
fn best_with_prefix(course: &Course, params: &FitnessParams, first: usize) -> Result<(Vec<usize>, f64, u64), FitnessError> {
    let n = course.len();
    let mut seq: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&v| v != first)).collect();
    let mut best = (seq.clone(), evaluate_sequence(&seq, course, params)?.value);
    let mut count = 1u64;
    while next_permutation(&mut seq[1..]) {
        count += 1;
        let value = evaluate_sequence(&seq, course, params)?.value;
        if value > best.1 {
            best = (seq.clone(), value);
        }
    }
    Ok((best.0, best.1, count))
}

/// The maximum-fitness ordering; ties go to the lexicographically smallest
/// path.
pub fn exhaustive_best(course: &Course, params: &FitnessParams) -> Result<OracleResult, OracleError> {
    exhaustive_best_with(course, params, Execution::default())
}

/// [`exhaustive_best`] with explicit execution. Branches on the first
/// concept run independently and merge in order, so the result does not
/// depend on `exec`.
pub fn exhaustive_best_with(course: &Course, params: &FitnessParams, exec: Execution) -> Result<OracleResult, OracleError> {
    let n = course.len();
    if n > MAX_CONCEPTS {
        return Err(OracleError::CourseTooLarge(n));
    }
    let branches = exec.map(n, |first| best_with_prefix(course, params, first));
    let mut result: Option<OracleResult> = None;
    let mut total = 0u64;
    for branch in branches {
        let (path, value, count) = branch?;
        total += count;
        if result.as_ref().is_none_or(|r| value > r.best_fitness) {
            result = Some(OracleResult {
                best_path: LearningPath::from_vec_unchecked(path),
                best_fitness: value,
                evaluated_count: 0,
            });
        }
    }
    let mut result = result.expect("a course has at least one concept");
    result.evaluated_count = total;
    Ok(result)
}
