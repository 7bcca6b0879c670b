use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use pathga::experiment::run_once;
use pathga::fitness::{evaluate_sequence, FitnessParams, FitnessVariant};
use pathga::ga::GaConfig;
use pathga::seeding::SaSchedule;
use pathga::{exhaustive_best, Concept, Course, LearningPath, RelationDegreeMatrix};

fn concepts(n: usize) -> impl Strategy<Value = Vec<Concept>> {
    prop::collection::vec((0.0..=1.0f64, 0.5..60.0f64, 0.5..5.0f64), n).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(id, (difficulty, granularity, rating))| Concept {
                id,
                title: format!("concept {id}"),
                difficulty,
                granularity,
                rating,
            })
            .collect()
    })
}

fn matrix(n: usize, symmetric: bool) -> impl Strategy<Value = RelationDegreeMatrix> {
    prop::collection::vec(0.0..=1.0f64, n * n).prop_map(move |cells| {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i.cmp(&j), symmetric) {
                        (std::cmp::Ordering::Equal, _) => 0.0,
                        (std::cmp::Ordering::Greater, true) => cells[j * n + i],
                        _ => cells[i * n + j],
                    })
                    .collect()
            })
            .collect();
        RelationDegreeMatrix::from_rows(rows).unwrap()
    })
}

fn course(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Course> {
    n.prop_flat_map(|n| (concepts(n), matrix(n, false)))
        .prop_map(|(c, m)| Course::new(c, m).unwrap())
}

fn course_with_path(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Course, LearningPath)> {
    course(n).prop_flat_map(|c| {
        let n = c.len();
        (Just(c), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
    .prop_map(|(c, seq)| {
        let n = c.len();
        (c, LearningPath::new(seq, n).unwrap())
    })
}

/// Straight transcription of the two formulas.
fn naive(seq: &[usize], course: &Course, w: f64, variant: FitnessVariant) -> f64 {
    let mut total = 0.0;
    for i in 1..seq.len() {
        let c = course.concept(seq[i]);
        let rd = course.rdm().get(seq[i], seq[i - 1]);
        total += match variant {
            FitnessVariant::CodeListing => c.granularity / c.rating * (w * rd) + (1.0 - w) * c.difficulty,
            FitnessVariant::TextFormula => c.granularity / c.rating * (1.0 - w) * rd + w * (1.0 - c.difficulty),
        };
    }
    total
}

fn params(w: f64, variant: FitnessVariant) -> FitnessParams {
    FitnessParams::new(w, variant).unwrap()
}

proptest! {
    #[test]
    fn written_courses_load_back(c in course(1..=12)) {
        let mut concepts = Vec::new();
        let mut rdm = Vec::new();
        c.write_course_csv(&mut concepts).unwrap();
        c.write_rdm_csv(&mut rdm).unwrap();
        let back = Course::from_readers(&concepts[..], &rdm[..]).unwrap();
        prop_assert_eq!(back.len(), c.len());
        for (a, b) in back.concepts().iter().zip(c.concepts()) {
            prop_assert_eq!(a.id, b.id);
            prop_assert!(a.rating > 0.0 && a.granularity > 0.0 && a.difficulty >= 0.0);
        }
        for i in 0..c.len() {
            for j in 0..c.len() {
                let v = back.rdm().get(i, j);
                prop_assert!((0.0..=1.0).contains(&v));
                prop_assert_eq!(v, c.rdm().get(i, j));
            }
        }
    }

    #[test]
    fn garbage_never_panics(a in ".{0,200}", b in ".{0,200}") {
        let _ = Course::from_readers(a.as_bytes(), b.as_bytes());
    }

    #[test]
    fn matches_naive_sum((c, p) in course_with_path(1..=9), w in 0.0..=1.0f64) {
        for variant in FitnessVariant::ALL {
            let got = evaluate_sequence(p.as_slice(), &c, &params(w, variant)).unwrap();
            assert_abs_diff_eq!(got.value, naive(p.as_slice(), &c, w, variant), epsilon = 1e-9);
            prop_assert_eq!(got.reported, (got.value * 100.0 + 0.5).floor() / 100.0);
        }
    }

    #[test]
    fn evaluation_is_pure((c, p) in course_with_path(2..=9)) {
        let before = c.clone();
        let prm = params(0.5, FitnessVariant::CodeListing);
        let a = evaluate_sequence(p.as_slice(), &c, &prm).unwrap();
        let b = evaluate_sequence(p.as_slice(), &c, &prm).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(c, before);
    }

    /// With a constant duration/rating ratio, reversing a path changes the
    /// score by the endpoint difficulty term plus the matrix asymmetry along
    /// the path.
    #[test]
    fn reversal_difference(
        n in 2usize..=9,
        ratio in 0.5..20.0f64,
        w in 0.0..=1.0f64,
        symmetric in any::<bool>(),
        seed in any::<u64>(),
    ) {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let concepts: Vec<Concept> = (0..n)
            .map(|id| Concept { id, title: String::new(), difficulty: rng.gen(), granularity: ratio, rating: 1.0 })
            .collect();
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && (!symmetric || i < j) {
                    rows[i][j] = rng.gen();
                    if symmetric {
                        rows[j][i] = rows[i][j];
                    }
                }
            }
        }
        let c = Course::new(concepts, RelationDegreeMatrix::from_rows(rows).unwrap()).unwrap();
        let mut seq: Vec<usize> = (0..n).collect();
        seq.shuffle(&mut rng);
        let rev: Vec<usize> = seq.iter().rev().copied().collect();
        let d = |i: usize| c.concept(i).difficulty;
        let (first, last) = (seq[0], seq[n - 1]);
        let asym: f64 = seq.windows(2).map(|p| c.rdm().get(p[1], p[0]) - c.rdm().get(p[0], p[1])).sum();
        if symmetric {
            prop_assert!(asym.abs() < 1e-12);
        }

        let diff = |variant| {
            let prm = params(w, variant);
            evaluate_sequence(&seq, &c, &prm).unwrap().value - evaluate_sequence(&rev, &c, &prm).unwrap().value
        };
        assert_abs_diff_eq!(
            diff(FitnessVariant::CodeListing),
            (1.0 - w) * (d(last) - d(first)) + w * ratio * asym,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            diff(FitnessVariant::TextFormula),
            w * (d(first) - d(last)) + (1.0 - w) * ratio * asym,
            epsilon = 1e-9
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_bounds_every_run(c in course(2..=7), seed in any::<u64>()) {
        let prm = params(0.5, FitnessVariant::CodeListing);
        let best = exhaustive_best(&c, &prm).unwrap();
        let all: Vec<usize> = (0..c.len()).collect();
        prop_assert!(best.best_fitness >= evaluate_sequence(&all, &c, &prm).unwrap().value);
        let cfg = GaConfig {
            population_size: 16,
            generations: 15,
            tournament_size: 3,
            hc_iterations: 5,
            sa_schedule: SaSchedule::new(5.0, 0.9, 20).unwrap(),
            rng_seed: seed,
            ..GaConfig::default()
        };
        let run = run_once(&c, &cfg).unwrap();
        prop_assert!(run.last_fitness <= best.best_fitness + 1e-9);
        prop_assert!(run.best_fitness <= best.best_fitness + 1e-9);
    }
}
