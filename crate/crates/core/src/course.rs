//! Course domain types and CSV ingestion.
//!
//! A [`Course`] is the searchable universe: the concepts (learning objects)
//! of one course unit plus the relation-degree matrix that couples them.
//! Both files are plain CSV, see [`Course::load`] for the accepted layouts.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Expected header of the course file.
pub const COURSE_HEADER: [&str; 5] = ["id", "title", "difficulty", "granularity", "rating"];

#[derive(Debug, Error)]
pub enum CourseError {
    #[error("cannot open {path}: {source}")]
    FileMissing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: line {line}: {message}")]
    MalformedRow {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}: line {line}: concept {id} has rating {rating}, ratings must be > 0")]
    NonPositiveRating {
        file: String,
        line: u64,
        id: usize,
        rating: f64,
    },
    #[error("{file}: line {line}: concept {id} has granularity {granularity}, must be > 0")]
    NonPositiveGranularity {
        file: String,
        line: u64,
        id: usize,
        granularity: f64,
    },
    #[error("{file}: line {line}: concept {id} has difficulty {difficulty}, must be >= 0")]
    NegativeDifficulty {
        file: String,
        line: u64,
        id: usize,
        difficulty: f64,
    },
    #[error("{file}: line {line}: expected concept id {expected}, found {found}")]
    IdSequence {
        file: String,
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("course has no concepts")]
    Empty,
    #[error("relation-degree matrix: {message}")]
    RdmDimensionMismatch { message: String },
    #[error("relation-degree matrix: row {row}, column {column} (line {line}): value {value} outside [0, 1]")]
    RdmValueOutOfRange {
        line: u64,
        row: usize,
        column: usize,
        value: f64,
    },
}

/// One learning object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub id: usize,
    pub title: String,
    pub difficulty: f64,
    /// Duration in minutes.
    pub granularity: f64,
    pub rating: f64,
}

/// Square matrix of relation degrees.
///
/// `get(current, previous)` is the degree credited when `current` directly
/// follows `previous` in a path. Rows index the current concept, columns the
/// previous one. Diagonal cells are stored but never read by fitness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDegreeMatrix {
    n: usize,
    values: Vec<f64>,
}

impl RelationDegreeMatrix {
    /// Builds a matrix from rows, checking shape and the `[0, 1]` range of
    /// every off-diagonal cell.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, CourseError> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(CourseError::RdmDimensionMismatch {
                    message: format!("row {r} has {} columns, expected {n}", row.len()),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if r != c && !(0.0..=1.0).contains(v) {
                    return Err(CourseError::RdmValueOutOfRange {
                        line: 0,
                        row: r,
                        column: c,
                        value: *v,
                    });
                }
            }
            values.extend(row);
        }
        Ok(Self { n, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Degree credited to `current` when it directly follows `previous`.
    #[inline]
    pub fn get(&self, current: usize, previous: usize) -> f64 {
        self.values[current * self.n + previous]
    }

    pub fn row(&self, current: usize) -> &[f64] {
        &self.values[current * self.n..(current + 1) * self.n]
    }

    /// Off-diagonal cell pairs `(i, j)` with `i < j` whose two entries differ.
    pub fn asymmetric_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetric_pairs().is_empty()
    }
}

/// Concepts plus their relation degrees. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Course {
    concepts: Vec<Concept>,
    rdm: RelationDegreeMatrix,
}

impl Course {
    pub fn new(concepts: Vec<Concept>, rdm: RelationDegreeMatrix) -> Result<Self, CourseError> {
        if concepts.is_empty() {
            return Err(CourseError::Empty);
        }
        for (expected, c) in concepts.iter().enumerate() {
            let line = expected as u64 + 2;
            check_concept(c, expected, "<memory>", line)?;
        }
        if rdm.dim() != concepts.len() {
            return Err(CourseError::RdmDimensionMismatch {
                message: format!(
                    "matrix is {0}x{0} but the course has {1} concepts",
                    rdm.dim(),
                    concepts.len()
                ),
            });
        }
        Ok(Self { concepts, rdm })
    }

    /// Loads a course from its concept file and relation-degree file.
    ///
    /// The concept file has the header `id,title,difficulty,granularity,rating`
    /// and one row per concept, ids `0..n` in order. The matrix file holds `n`
    /// rows of `n` reals, optionally preceded by a header row of ids. Lines
    /// starting with `#` are comments in both files.
    pub fn load(course_file: impl AsRef<Path>, rdm_file: impl AsRef<Path>) -> Result<Self, CourseError> {
        let course_file = course_file.as_ref();
        let rdm_file = rdm_file.as_ref();
        let open = |p: &Path| {
            File::open(p).map_err(|source| CourseError::FileMissing {
                path: p.to_path_buf(),
                source,
            })
        };
        let concepts = read_concepts(open(course_file)?, &course_file.display().to_string())?;
        let rdm = read_rdm(open(rdm_file)?, concepts.len())?;
        let course = Self::new(concepts, rdm)?;
        let asym = course.rdm.asymmetric_pairs();
        if !asym.is_empty() {
            log::warn!(
                "{}: relation-degree matrix is asymmetric in {} cell pairs (first: {:?})",
                rdm_file.display(),
                asym.len(),
                asym[0]
            );
        }
        Ok(course)
    }

    /// Parses both files from readers; used by `load` and the round-trip tests.
    pub fn from_readers(course: impl Read, rdm: impl Read) -> Result<Self, CourseError> {
        let concepts = read_concepts(course, "<course>")?;
        let rdm = read_rdm(rdm, concepts.len())?;
        Self::new(concepts, rdm)
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, id: usize) -> &Concept {
        &self.concepts[id]
    }

    pub fn rdm(&self) -> &RelationDegreeMatrix {
        &self.rdm
    }

    /// The lecture order: concepts in file order.
    pub fn traditional_path(&self) -> LearningPath {
        LearningPath::identity(self.len())
    }

    /// Writes the concept file in the format `load` accepts.
    pub fn write_course_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COURSE_HEADER)?;
        for c in &self.concepts {
            w.write_record([
                c.id.to_string(),
                c.title.clone(),
                c.difficulty.to_string(),
                c.granularity.to_string(),
                c.rating.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the matrix file with a header row of ids.
    pub fn write_rdm_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record((0..self.len()).map(|i| i.to_string()))?;
        for r in 0..self.len() {
            w.write_record(self.rdm.row(r).iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_concept(c: &Concept, expected: usize, file: &str, line: u64) -> Result<(), CourseError> {
    let file = file.to_string();
    if c.id != expected {
        return Err(CourseError::IdSequence {
            file,
            line,
            expected,
            found: c.id,
        });
    }
    // NaN fails every comparison below, so it lands in the matching error.
    if !(c.rating > 0.0) || !c.rating.is_finite() {
        return Err(CourseError::NonPositiveRating {
            file,
            line,
            id: c.id,
            rating: c.rating,
        });
    }
    if !(c.granularity > 0.0) || !c.granularity.is_finite() {
        return Err(CourseError::NonPositiveGranularity {
            file,
            line,
            id: c.id,
            granularity: c.granularity,
        });
    }
    if !(c.difficulty >= 0.0) || !c.difficulty.is_finite() {
        return Err(CourseError::NegativeDifficulty {
            file,
            line,
            id: c.id,
            difficulty: c.difficulty,
        });
    }
    Ok(())
}

fn reader(input: impl Read, has_headers: bool) -> csv::Reader<impl Read> {
    csv::ReaderBuilder::new()
        .has_headers(has_headers)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input)
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn malformed(file: &str, line: u64, message: impl Into<String>) -> CourseError {
    CourseError::MalformedRow {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

fn csv_error(file: &str, e: csv::Error) -> CourseError {
    let line = e.position().map_or(0, |p| p.line());
    malformed(file, line, e.to_string())
}

fn parse_real(file: &str, line: u64, field: &str, raw: &str) -> Result<f64, CourseError> {
    raw.parse::<f64>()
        .map_err(|_| malformed(file, line, format!("{field}: cannot parse {raw:?} as a number")))
}

fn read_concepts(input: impl Read, file: &str) -> Result<Vec<Concept>, CourseError> {
    let mut rdr = reader(input, true);
    let header = rdr.headers().map_err(|e| csv_error(file, e))?.clone();
    if header.iter().ne(COURSE_HEADER) {
        return Err(malformed(
            file,
            line_of(&header),
            format!("expected header {}, found {}", COURSE_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut concepts = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(file, e))?;
        let line = line_of(&record);
        if record.len() != COURSE_HEADER.len() {
            return Err(malformed(
                file,
                line,
                format!("expected {} fields, found {}", COURSE_HEADER.len(), record.len()),
            ));
        }
        let id = record[0]
            .parse::<usize>()
            .map_err(|_| malformed(file, line, format!("id: {:?} is not a non-negative integer", &record[0])))?;
        let concept = Concept {
            id,
            title: record[1].to_string(),
            difficulty: parse_real(file, line, "difficulty", &record[2])?,
            granularity: parse_real(file, line, "granularity", &record[3])?,
            rating: parse_real(file, line, "rating", &record[4])?,
        };
        check_concept(&concept, concepts.len(), file, line)?;
        concepts.push(concept);
    }
    if concepts.is_empty() {
        return Err(CourseError::Empty);
    }
    Ok(concepts)
}

fn read_rdm(input: impl Read, n: usize) -> Result<RelationDegreeMatrix, CourseError> {
    const FILE: &str = "relation-degree matrix";
    let records = reader(input, false)
        .records()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| csv_error(FILE, e))?;

    // A header row of ids is recognized by count alone: n + 1 rows means the
    // first one must be exactly `0,1,...,n-1`.
    let body = match records.len() {
        len if len == n => &records[..],
        len if len == n + 1 => {
            let header = &records[0];
            let ok = header.len() == n
                && header.iter().enumerate().all(|(i, f)| f.parse::<usize>() == Ok(i));
            if !ok {
                return Err(malformed(
                    FILE,
                    line_of(header),
                    format!("header row must list ids 0..{}", n.saturating_sub(1)),
                ));
            }
            &records[1..]
        }
        len => {
            return Err(CourseError::RdmDimensionMismatch {
                message: format!("{len} rows for a course with {n} concepts"),
            })
        }
    };

    let mut values = Vec::with_capacity(n * n);
    for (r, record) in body.iter().enumerate() {
        let line = line_of(record);
        if record.len() != n {
            return Err(CourseError::RdmDimensionMismatch {
                message: format!("row {r} (line {line}) has {} columns, expected {n}", record.len()),
            });
        }
        for (c, raw) in record.iter().enumerate() {
            let v = parse_real(FILE, line, &format!("column {c}"), raw)?;
            if r != c && !(0.0..=1.0).contains(&v) {
                return Err(CourseError::RdmValueOutOfRange {
                    line,
                    row: r,
                    column: c,
                    value: v,
                });
            }
            values.push(v);
        }
    }
    Ok(RelationDegreeMatrix { n, values })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("invalid permutation: expected {expected} concepts, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("invalid permutation: concept id {0} out of range")]
    OutOfRange(usize),
    #[error("invalid permutation: concept id {0} appears more than once")]
    Duplicate(usize),
    #[error("invalid path {0:?}: expected comma-separated concept ids")]
    Parse(String),
}

/// An ordering of every concept of a course: a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LearningPath(Vec<usize>);

impl LearningPath {
    /// Wraps `sequence` after checking it is a permutation of `0..n`.
    pub fn new(sequence: Vec<usize>, n: usize) -> Result<Self, PathError> {
        check_permutation(&sequence, n)?;
        Ok(Self(sequence))
    }

    /// Wraps a sequence the caller has already proven to be a permutation.
    pub(crate) fn from_vec_unchecked(sequence: Vec<usize>) -> Self {
        debug_assert!(check_permutation(&sequence, sequence.len()).is_ok());
        Self(sequence)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Re-checks the permutation invariant against a course size.
    pub fn validate(&self, n: usize) -> Result<(), PathError> {
        check_permutation(&self.0, n)
    }
}

impl fmt::Display for LearningPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

impl FromStr for LearningPath {
    type Err = PathError;

    /// Parses `"0,2,1"`. Checks the permutation invariant against the
    /// sequence's own length.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ids = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PathError::Parse(s.to_string()))?;
        let n = ids.len();
        Self::new(ids, n)
    }
}

impl AsRef<[usize]> for LearningPath {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

pub(crate) fn check_permutation(seq: &[usize], n: usize) -> Result<(), PathError> {
    if seq.len() != n {
        return Err(PathError::WrongLength {
            expected: n,
            found: seq.len(),
        });
    }
    let mut seen = vec![false; n];
    for &id in seq {
        if id >= n {
            return Err(PathError::OutOfRange(id));
        }
        if std::mem::replace(&mut seen[id], true) {
            return Err(PathError::Duplicate(id));
        }
    }
    Ok(())
}
