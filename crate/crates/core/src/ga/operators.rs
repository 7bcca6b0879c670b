//! Permutation-preserving variation: swap mutation, PMX and cycle crossover.
//!
//! The `_slices` forms work on any sequence of distinct elements; the
//! [`LearningPath`] forms wrap them.

use std::collections::HashMap;
use std::hash::Hash;

use rand::Rng;

use super::GaError;
use crate::course::LearningPath;

/// Two distinct positions in `0..n`, uniformly. Requires `n >= 2`.
pub fn swap_positions<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Copy of `path` with two distinct, uniformly drawn positions exchanged.
pub fn swap_mutate<R: Rng + ?Sized>(path: &LearningPath, rng: &mut R) -> Result<LearningPath, GaError> {
    if path.len() < 2 {
        return Err(GaError::PathTooShort(path.len()));
    }
    let (i, j) = swap_positions(path.len(), rng);
    let mut seq = path.as_slice().to_vec();
    seq.swap(i, j);
    Ok(LearningPath::from_vec_unchecked(seq))
}

fn positions<T: Copy + Eq + Hash>(seq: &[T]) -> HashMap<T, usize> {
    seq.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

fn same_elements<T: Copy + Eq + Hash>(a: &[T], b: &[T]) -> Result<HashMap<T, usize>, GaError> {
    if a.len() != b.len() {
        return Err(GaError::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let index = positions(b);
    if index.len() != b.len() || a.iter().any(|v| !index.contains_key(v)) || positions(a).len() != a.len() {
        return Err(GaError::ForeignGene);
    }
    Ok(index)
}

/// One PMX child: `donor[lo..=hi]` kept in place, everything else resolved
/// against `other` through the segment mapping.
fn pmx_child<T: Copy + Eq + Hash>(donor: &[T], other: &[T], other_pos: &HashMap<T, usize>, lo: usize, hi: usize) -> Vec<T> {
    let n = donor.len();
    let mut child: Vec<Option<T>> = vec![None; n];
    for i in lo..=hi {
        child[i] = Some(donor[i]);
    }
    let in_segment = |p: usize| (lo..=hi).contains(&p);
    for i in lo..=hi {
        let value = other[i];
        if donor[lo..=hi].contains(&value) {
            continue;
        }
        // Follow donor[pos] -> its position in `other` until we leave the segment.
        let mut pos = i;
        while in_segment(pos) {
            pos = other_pos[&donor[pos]];
        }
        child[pos] = Some(value);
    }
    child
        .into_iter()
        .zip(other)
        .map(|(slot, &fallback)| slot.unwrap_or(fallback))
        .collect()
}

/// PMX with an explicit inclusive segment `[lo, hi]`.
pub fn pmx_with_cuts<T: Copy + Eq + Hash>(parent1: &[T], parent2: &[T], lo: usize, hi: usize) -> Result<(Vec<T>, Vec<T>), GaError> {
    let pos2 = same_elements(parent1, parent2)?;
    let pos1 = positions(parent1);
    if lo > hi || hi >= parent1.len() {
        return Err(GaError::InvalidConfig(format!(
            "segment [{lo}, {hi}] invalid for length {}",
            parent1.len()
        )));
    }
    Ok((
        pmx_child(parent1, parent2, &pos2, lo, hi),
        pmx_child(parent2, parent1, &pos1, lo, hi),
    ))
}

/// PMX with two distinct cut points drawn uniformly; the segment spans both
/// cuts inclusively.
pub fn pmx_crossover_slices<T: Copy + Eq + Hash, R: Rng + ?Sized>(
    parent1: &[T],
    parent2: &[T],
    rng: &mut R,
) -> Result<(Vec<T>, Vec<T>), GaError> {
    same_elements(parent1, parent2)?;
    let n = parent1.len();
    if n < 2 {
        return Ok((parent1.to_vec(), parent2.to_vec()));
    }
    let (a, b) = swap_positions(n, rng);
    pmx_with_cuts(parent1, parent2, a.min(b), a.max(b))
}

pub fn pmx_crossover<R: Rng + ?Sized>(
    parent1: &LearningPath,
    parent2: &LearningPath,
    rng: &mut R,
) -> Result<(LearningPath, LearningPath), GaError> {
    let (a, b) = pmx_crossover_slices(parent1.as_slice(), parent2.as_slice(), rng)?;
    Ok((LearningPath::from_vec_unchecked(a), LearningPath::from_vec_unchecked(b)))
}

/// Cycle crossover. Cycles are traced from the lowest unassigned position;
/// the first, third, ... cycle keeps parent 1's genes in child 1, the second,
/// fourth, ... takes parent 2's. Child 2 is the complement.
pub fn cycle_crossover_slices<T: Copy + Eq + Hash>(parent1: &[T], parent2: &[T]) -> Result<(Vec<T>, Vec<T>), GaError> {
    same_elements(parent1, parent2)?;
    let pos1 = positions(parent1);
    let n = parent1.len();
    let mut child1 = parent1.to_vec();
    let mut child2 = parent2.to_vec();
    let mut assigned = vec![false; n];
    let mut cycle = 0usize;
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut pos = start;
        loop {
            assigned[pos] = true;
            if cycle % 2 == 1 {
                child1[pos] = parent2[pos];
                child2[pos] = parent1[pos];
            }
            pos = pos1[&parent2[pos]];
            if pos == start {
                break;
            }
        }
        cycle += 1;
    }
    Ok((child1, child2))
}

pub fn cycle_crossover(parent1: &LearningPath, parent2: &LearningPath) -> Result<(LearningPath, LearningPath), GaError> {
    let (a, b) = cycle_crossover_slices(parent1.as_slice(), parent2.as_slice())?;
    Ok((LearningPath::from_vec_unchecked(a), LearningPath::from_vec_unchecked(b)))
}
