//! Path quality.
//!
//! Two forms of the objective exist and they do not agree: the written
//! formula and the code that was actually run. Both are available through
//! [`FitnessVariant`]; [`FitnessVariant::CodeListing`] is the default.
//!
//! For a path `p` with concept `c = p[i]` preceded by `q = p[i - 1]`, every
//! position `i >= 1` adds one term (position 0 adds nothing):
//!
//! * `CodeListing`: `(g_c / r_c) * (w * rd(c, q)) + (1 - w) * d_c`
//! * `TextFormula`: `(g_c / r_c) * (1 - w) * rd(c, q) + w * (1 - d_c)`
//!
//! Higher is fitter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::course::{check_permutation, Course, LearningPath, PathError};

pub const DEFAULT_WEIGHT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitnessError {
    #[error(transparent)]
    InvalidPermutation(#[from] PathError),
    #[error("weight w = {0} outside [0, 1]")]
    WeightOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessVariant {
    /// The written formula: `w` weighs `(1 - d)`, `1 - w` weighs the relation term.
    TextFormula,
    /// The executed code: `w` weighs the relation term, `1 - w` weighs `d`.
    #[default]
    CodeListing,
}

impl FitnessVariant {
    pub const ALL: [FitnessVariant; 2] = [FitnessVariant::CodeListing, FitnessVariant::TextFormula];

    pub fn as_str(self) -> &'static str {
        match self {
            FitnessVariant::TextFormula => "text",
            FitnessVariant::CodeListing => "listing",
        }
    }
}

impl fmt::Display for FitnessVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitnessVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(FitnessVariant::TextFormula),
            "listing" => Ok(FitnessVariant::CodeListing),
            other => Err(format!("unknown fitness variant {other:?} (expected text|listing)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessParams {
    w: f64,
    variant: FitnessVariant,
}

impl FitnessParams {
    pub fn new(w: f64, variant: FitnessVariant) -> Result<Self, FitnessError> {
        if !(0.0..=1.0).contains(&w) {
            return Err(FitnessError::WeightOutOfRange(w));
        }
        Ok(Self { w, variant })
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn variant(&self) -> FitnessVariant {
        self.variant
    }
}

impl Default for FitnessParams {
    fn default() -> Self {
        Self {
            w: DEFAULT_WEIGHT,
            variant: FitnessVariant::default(),
        }
    }
}

/// A fitness value at full precision plus its two-decimal presentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessScore {
    pub value: f64,
    pub reported: f64,
}

impl FitnessScore {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            reported: round_half_up(value),
        }
    }
}

/// Rounds half-up to two decimals (`floor(x * 100 + 0.5) / 100`).
pub fn round_half_up(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

/// Scores `path` on `course`.
pub fn evaluate(path: &LearningPath, course: &Course, params: &FitnessParams) -> Result<FitnessScore, FitnessError> {
    evaluate_sequence(path.as_slice(), course, params)
}

/// Like [`evaluate`] for a borrowed id sequence; checks the permutation itself.
pub fn evaluate_sequence(seq: &[usize], course: &Course, params: &FitnessParams) -> Result<FitnessScore, FitnessError> {
    check_permutation(seq, course.len())?;
    Ok(FitnessScore::new(path_value(seq, course, params)))
}

/// Summation without the permutation check; callers guarantee validity.
pub(crate) fn path_value(seq: &[usize], course: &Course, params: &FitnessParams) -> f64 {
    let w = params.w;
    let rdm = course.rdm();
    let mut total = 0.0;
    for pair in seq.windows(2) {
        let (prev, cur) = (pair[0], pair[1]);
        let c = course.concept(cur);
        let rd = rdm.get(cur, prev);
        let ratio = c.granularity / c.rating;
        total += match params.variant {
            FitnessVariant::CodeListing => ratio * (w * rd) + (1.0 - w) * c.difficulty,
            FitnessVariant::TextFormula => ratio * (1.0 - w) * rd + w * (1.0 - c.difficulty),
        };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::course::{Concept, RelationDegreeMatrix};
    use approx::assert_abs_diff_eq;

    fn table1() -> Course {
        Course::from_readers(
            include_str!("../data/table1.csv").as_bytes(),
            include_str!("../data/table1_rdm.csv").as_bytes(),
        )
        .unwrap()
    }

    fn params(w: f64, variant: FitnessVariant) -> FitnessParams {
        FitnessParams::new(w, variant).unwrap()
    }

    #[test]
    fn single_concept_scores_zero() {
        let course = table1();
        let one = Course::new(
            vec![course.concept(0).clone()],
            RelationDegreeMatrix::from_rows(vec![vec![0.0]]).unwrap(),
        )
        .unwrap();
        for variant in FitnessVariant::ALL {
            let s = evaluate(&LearningPath::identity(1), &one, &params(0.5, variant)).unwrap();
            assert_eq!(s.value, 0.0);
            assert_eq!(s.reported, 0.0);
        }
    }

    fn first_two() -> Course {
        let course = table1();
        let rd = course.rdm().get(1, 0);
        Course::new(
            course.concepts()[..2].to_vec(),
            RelationDegreeMatrix::from_rows(vec![vec![0.0, rd], vec![rd, 0.0]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn two_concept_hand_values() {
        let course = first_two();
        let path = LearningPath::identity(2);
        // (10/7) * (0.5 * 0.985) + 0.5 * 1.65
        let listing = evaluate(&path, &course, &params(0.5, FitnessVariant::CodeListing)).unwrap();
        assert_abs_diff_eq!(listing.value, 10.0 / 7.0 * 0.4925 + 0.825, epsilon = 1e-12);
        assert_eq!(listing.reported, 1.53);
        // (10/7) * 0.5 * 0.985 + 0.5 * (1 - 1.65)
        let text = evaluate(&path, &course, &params(0.5, FitnessVariant::TextFormula)).unwrap();
        assert_abs_diff_eq!(text.value, 10.0 / 7.0 * 0.4925 - 0.325, epsilon = 1e-12);
        assert_eq!(text.reported, 0.38);
    }

    #[test]
    fn rejects_invalid_paths_and_weights() {
        let course = table1();
        let bad = LearningPath::identity(12);
        assert!(matches!(
            evaluate(&bad, &course, &FitnessParams::default()),
            Err(FitnessError::InvalidPermutation(PathError::WrongLength { .. }))
        ));
        assert!(FitnessParams::new(1.5, FitnessVariant::CodeListing).is_err());
        assert!(FitnessParams::new(-0.1, FitnessVariant::TextFormula).is_err());
        assert!(FitnessParams::new(f64::NAN, FitnessVariant::TextFormula).is_err());
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_half_up(1.005_000_1), 1.01);
        assert_eq!(round_half_up(0.375), 0.38);
        assert_eq!(round_half_up(-0.125), -0.12);
        assert_eq!(FitnessScore::new(41.676).reported, 41.68);
    }

    #[test]
    fn traditional_path_regression() {
        let course = table1();
        let path = course.traditional_path();
        let listing = evaluate(&path, &course, &FitnessParams::default()).unwrap();
        let text = evaluate(&path, &course, &params(0.5, FitnessVariant::TextFormula)).unwrap();
        assert_eq!(listing.reported, TRADITIONAL_LISTING);
        assert_eq!(text.reported, TRADITIONAL_TEXT);
    }

    // Pinned from the shipped sample data at w = 0.5 (independent evaluation:
    // 24.950808501996..., -2.949191498003...).
    const TRADITIONAL_LISTING: f64 = 24.95;
    const TRADITIONAL_TEXT: f64 = -2.95;

    #[test]
    fn raising_a_used_degree_raises_fitness() {
        let mut concepts = table1().concepts()[..3].to_vec();
        concepts.iter_mut().for_each(|c: &mut Concept| c.title.clear());
        let build = |rd10: f64| {
            Course::new(
                concepts.clone(),
                RelationDegreeMatrix::from_rows(vec![
                    vec![0.0, 0.2, 0.3],
                    vec![rd10, 0.0, 0.4],
                    vec![0.5, 0.6, 0.0],
                ])
                .unwrap(),
            )
            .unwrap()
        };
        let (low, high) = (build(0.1), build(0.9));
        let path = LearningPath::identity(3);
        for w in [0.0, 0.3, 0.7, 1.0] {
            let l = params(w, FitnessVariant::CodeListing);
            let t = params(w, FitnessVariant::TextFormula);
            if w > 0.0 {
                assert!(evaluate(&path, &high, &l).unwrap().value > evaluate(&path, &low, &l).unwrap().value);
            }
            if w < 1.0 {
                assert!(evaluate(&path, &high, &t).unwrap().value > evaluate(&path, &low, &t).unwrap().value);
            }
        }
    }
}
