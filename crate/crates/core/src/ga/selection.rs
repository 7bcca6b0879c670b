use rand::seq::index;
use rand::Rng;

use super::{GaError, Individual};

/// Draws `k` distinct individuals uniformly and returns the fittest.
/// Ties go to the lowest population index.
pub fn tournament_select<'a, R: Rng + ?Sized>(
    population: &'a [Individual],
    k: usize,
    rng: &mut R,
) -> Result<&'a Individual, GaError> {
    if k == 0 || k > population.len() {
        return Err(GaError::TournamentSize {
            k,
            population: population.len(),
        });
    }
    let winner = index::sample(rng, population.len(), k)
        .into_iter()
        .reduce(|best, i| {
            let (a, b) = (population[best].value(), population[i].value());
            if b > a || (b == a && i < best) {
                i
            } else {
                best
            }
        })
        .expect("k >= 1");
    Ok(&population[winner])
}

/// Fitness-proportional selection. Individual `j` is returned with
/// probability `f_j / sum(f)`.
pub fn roulette_select<'a, R: Rng + ?Sized>(population: &'a [Individual], rng: &mut R) -> Result<&'a Individual, GaError> {
    if population.is_empty() {
        return Err(GaError::EmptyPopulation);
    }
    let mut total = 0.0;
    for (index, ind) in population.iter().enumerate() {
        let value = ind.value();
        if !(value >= 0.0) {
            return Err(GaError::NegativeFitness { index, value });
        }
        total += value;
    }
    if !(total > 0.0) || !total.is_finite() {
        return Err(GaError::TotalFitnessZero);
    }
    let spin: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, ind) in population.iter().enumerate() {
        if ind.value() == 0.0 {
            continue;
        }
        cumulative += ind.value() / total;
        last_positive = i;
        // strict: a zero-width slice can never catch the spin
        if spin < cumulative {
            return Ok(ind);
        }
    }
    // rounding left the cumulative share just below the spin
    Ok(&population[last_positive])
}
