use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{cycle_crossover, pmx_crossover, roulette_select, swap_mutate, tournament_select};
use super::{Crossover, GaConfig, GaError, Individual, Selection};
use crate::course::{Course, LearningPath};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    /// 1-based.
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// Best fitness in generation 1.
    pub first_fitness: f64,
    /// Best fitness in the final generation.
    pub last_fitness: f64,
    /// Fittest path seen at any point of the run.
    pub best_path: LearningPath,
    pub best_fitness: f64,
    pub convergence: Vec<GenerationStats>,
}

fn stats(generation: usize, population: &[Individual]) -> GenerationStats {
    let best = population.iter().map(Individual::value).fold(f64::NEG_INFINITY, f64::max);
    let mean = population.iter().map(Individual::value).sum::<f64>() / population.len() as f64;
    GenerationStats {
        generation,
        best_fitness: best,
        mean_fitness: mean,
    }
}

/// Index of the fittest individual; lowest index wins ties.
fn fittest(population: &[Individual]) -> usize {
    let mut best = 0;
    for (i, ind) in population.iter().enumerate().skip(1) {
        if ind.value() > population[best].value() {
            best = i;
        }
    }
    best
}

fn select<'a, R: Rng + ?Sized>(population: &'a [Individual], config: &GaConfig, rng: &mut R) -> Result<&'a Individual, GaError> {
    match config.selection {
        Selection::Tournament => tournament_select(population, config.tournament_size, rng),
        Selection::Roulette => roulette_select(population, rng),
    }
}

fn breed<R: Rng + ?Sized>(
    a: &LearningPath,
    b: &LearningPath,
    config: &GaConfig,
    rng: &mut R,
) -> Result<(LearningPath, LearningPath), GaError> {
    let n = a.len();
    let (mut c1, mut c2) = if rng.gen::<f64>() < config.crossover_rate {
        match config.crossover {
            Crossover::Pmx => pmx_crossover(a, b, rng)?,
            Crossover::Cycle => cycle_crossover(a, b)?,
        }
    } else {
        (a.clone(), b.clone())
    };
    if n >= 2 {
        if rng.gen::<f64>() < config.mutation_rate {
            c1 = swap_mutate(&c1, rng)?;
        }
        if rng.gen::<f64>() < config.mutation_rate {
            c2 = swap_mutate(&c2, rng)?;
        }
    }
    Ok((c1, c2))
}

/// Runs `config.generations` generational steps starting from
/// `seed_population`.
///
/// Each step keeps the `elitism_count` fittest individuals unchanged and
/// fills the rest with offspring: two parents are selected, recombined with
/// probability `crossover_rate` (otherwise cloned), and each child is
/// swap-mutated with probability `mutation_rate`. Generation `g` in the
/// convergence record is the population after step `g`.
///
/// All randomness comes from the evolution stream of `config.rng_seed`.
pub fn evolve(course: &Course, config: &GaConfig, seed_population: Vec<Individual>) -> Result<RunResult, GaError> {
    config.validate()?;
    if seed_population.len() != config.population_size {
        return Err(GaError::PopulationSizeMismatch {
            expected: config.population_size,
            found: seed_population.len(),
        });
    }
    for ind in &seed_population {
        ind.path.validate(course.len()).map_err(crate::fitness::FitnessError::from)?;
    }

    let params = config.fitness_params;
    let mut rng = rng::evolution_rng(config.rng_seed);
    let mut population = seed_population;
    let mut best = population[fittest(&population)].clone();
    let mut convergence = Vec::with_capacity(config.generations);
    let mut order: Vec<usize> = Vec::with_capacity(config.population_size);

    for generation in 1..=config.generations {
        order.clear();
        order.extend(0..population.len());
        // stable: equal fitness keeps population order
        order.sort_by(|&a, &b| population[b].value().total_cmp(&population[a].value()));

        let mut next: Vec<Individual> = order[..config.elitism_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < config.population_size {
            let p1 = select(&population, config, &mut rng)?;
            let p2 = select(&population, config, &mut rng)?;
            let (c1, c2) = breed(&p1.path, &p2.path, config, &mut rng)?;
            next.push(Individual::evaluated_unchecked(c1, course, &params));
            if next.len() < config.population_size {
                next.push(Individual::evaluated_unchecked(c2, course, &params));
            }
        }
        population = next;

        debug_assert!(population.iter().all(|ind| ind.path.validate(course.len()).is_ok()));

        let gen_best = &population[fittest(&population)];
        if gen_best.value() > best.value() {
            best = gen_best.clone();
        }
        convergence.push(stats(generation, &population));
    }

    Ok(RunResult {
        first_fitness: convergence[0].best_fitness,
        last_fitness: convergence[convergence.len() - 1].best_fitness,
        best_path: best.path,
        best_fitness: best.fitness.value,
        convergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::course::{Concept, RelationDegreeMatrix};
    use crate::fitness::{evaluate, FitnessParams};
    use crate::ga::InitMethod;
    use crate::seeding::seed_population;

    fn table1() -> Course {
        Course::from_readers(
            include_str!("../../data/table1.csv").as_bytes(),
            include_str!("../../data/table1_rdm.csv").as_bytes(),
        )
        .unwrap()
    }

    fn run(course: &Course, config: &GaConfig) -> RunResult {
        let pop = seed_population(course, config, &mut rng::seeding_rng(config.rng_seed)).unwrap();
        evolve(course, config, pop).unwrap()
    }

    fn small_config(seed: u64) -> GaConfig {
        GaConfig {
            population_size: 20,
            generations: 30,
            tournament_size: 3,
            rng_seed: seed,
            ..GaConfig::default()
        }
    }

    #[test]
    fn single_generation() {
        let course = table1();
        let cfg = GaConfig {
            generations: 1,
            ..small_config(1)
        };
        let r = run(&course, &cfg);
        assert_eq!(r.convergence.len(), 1);
        assert_eq!(r.first_fitness, r.last_fitness);
    }

    #[test]
    fn two_concepts_reach_the_better_order() {
        let concepts = vec![
            Concept {
                id: 0,
                title: "a".into(),
                difficulty: 1.0,
                granularity: 5.0,
                rating: 6.0,
            },
            Concept {
                id: 1,
                title: "b".into(),
                difficulty: 3.0,
                granularity: 10.0,
                rating: 7.0,
            },
        ];
        let course = Course::new(
            concepts,
            RelationDegreeMatrix::from_rows(vec![vec![0.0, 0.2], vec![0.9, 0.0]]).unwrap(),
        )
        .unwrap();
        let params = FitnessParams::default();
        let both = [LearningPath::identity(2), LearningPath::new(vec![1, 0], 2).unwrap()];
        let optimum = both
            .iter()
            .map(|p| evaluate(p, &course, &params).unwrap().value)
            .fold(f64::NEG_INFINITY, f64::max);
        for seed in 0..10 {
            for selection in Selection::ALL {
                for crossover in Crossover::ALL {
                    let cfg = GaConfig {
                        population_size: 4,
                        generations: 5,
                        tournament_size: 2,
                        selection,
                        crossover,
                        rng_seed: seed,
                        ..GaConfig::default()
                    };
                    assert_eq!(run(&course, &cfg).last_fitness, optimum);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_result() {
        let course = table1();
        for crossover in Crossover::ALL {
            let cfg = GaConfig {
                crossover,
                init: InitMethod::HillClimbing,
                ..small_config(77)
            };
            assert_eq!(run(&course, &cfg), run(&course, &cfg));
        }
    }

    #[test]
    fn elitist_runs_never_lose_their_best() {
        let course = table1();
        for selection in Selection::ALL {
            let cfg = GaConfig {
                selection,
                ..small_config(5)
            };
            let r = run(&course, &cfg);
            for w in r.convergence.windows(2) {
                assert!(w[1].best_fitness >= w[0].best_fitness);
            }
            assert_eq!(r.best_fitness, r.last_fitness);
            assert!(r.last_fitness >= r.first_fitness);
            assert_eq!(evaluate(&r.best_path, &course, &cfg.fitness_params).unwrap().value, r.best_fitness);
        }
    }

    #[test]
    fn rejects_wrong_population_size() {
        let course = table1();
        let cfg = small_config(0);
        let mut pop = seed_population(&course, &cfg, &mut rng::seeding_rng(0)).unwrap();
        pop.pop();
        assert!(matches!(
            evolve(&course, &cfg, pop),
            Err(GaError::PopulationSizeMismatch { expected: 20, found: 19 })
        ));
    }

    #[test]
    fn single_concept_course_evolves() {
        let course = Course::new(
            vec![table1().concept(0).clone()],
            RelationDegreeMatrix::from_rows(vec![vec![0.0]]).unwrap(),
        )
        .unwrap();
        let cfg = GaConfig {
            crossover: Crossover::Pmx,
            selection: Selection::Tournament,
            ..small_config(3)
        };
        let r = run(&course, &cfg);
        assert_eq!(r.best_path.as_slice(), &[0]);
        assert_eq!(r.last_fitness, 0.0);
    }
}
