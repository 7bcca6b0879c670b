//! `pathga` command line.
//!
//! Exit codes: 0 success, 1 input or data error, 2 usage error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::course::{Course, LearningPath};
use crate::experiment::{self, RunReport};
use crate::fitness::{self, FitnessParams, FitnessVariant, DEFAULT_WEIGHT};
use crate::ga::{self, Crossover, GaConfig, GaError, InitMethod, Selection};
use crate::oracle;
use crate::par::Execution;
use crate::seeding::{self, SaSchedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pathga", version, about = "Genetic-algorithm learning path sequencing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one GA configuration and write its result and convergence log.
    Run(RunArgs),
    /// Run every selection x init x crossover combination.
    Matrix(MatrixArgs),
    /// Score a path under both fitness variants.
    Evaluate(EvaluateArgs),
    /// Exhaustively search a small course (at most 10 concepts).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct CourseArgs {
    /// Concept CSV (id,title,difficulty,granularity,rating).
    #[arg(long)]
    course: PathBuf,
    /// Relation-degree CSV (row = current concept, column = previous).
    #[arg(long)]
    rdm: PathBuf,
}

#[derive(Debug, Args)]
struct FitnessArgs {
    /// Fitness weight in [0, 1].
    #[arg(long, default_value_t = DEFAULT_WEIGHT)]
    w: f64,
    /// Fitness form: `listing` (as executed) or `text` (as written).
    #[arg(long, default_value = "listing")]
    variant: FitnessVariant,
}

impl FitnessArgs {
    fn params(&self) -> Result<FitnessParams, Failure> {
        FitnessParams::new(self.w, self.variant).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
struct GaArgs {
    #[arg(long = "pop-size", default_value_t = ga::DEFAULT_POPULATION_SIZE)]
    pop_size: usize,
    #[arg(long, default_value_t = ga::DEFAULT_GENERATIONS)]
    generations: usize,
    #[arg(long = "tournament-size", default_value_t = ga::DEFAULT_TOURNAMENT_SIZE)]
    tournament_size: usize,
    #[arg(long = "crossover-rate", default_value_t = ga::DEFAULT_CROSSOVER_RATE)]
    crossover_rate: f64,
    #[arg(long = "mutation-rate", default_value_t = ga::DEFAULT_MUTATION_RATE)]
    mutation_rate: f64,
    /// Individuals carried over unchanged each generation.
    #[arg(long, default_value_t = ga::DEFAULT_ELITISM)]
    elitism: usize,
    /// Hill-climbing steps per seeded individual.
    #[arg(long = "hc-iterations", default_value_t = ga::DEFAULT_HC_ITERATIONS)]
    hc_iterations: usize,
    /// Annealing start temperature.
    #[arg(long = "sa-temperature", default_value_t = seeding::DEFAULT_INITIAL_TEMPERATURE)]
    sa_temperature: f64,
    /// Annealing cooling factor in (0, 1).
    #[arg(long = "sa-cooling", default_value_t = seeding::DEFAULT_COOLING_FACTOR)]
    sa_cooling: f64,
    /// Annealing steps per seeded individual.
    #[arg(long = "sa-steps", default_value_t = seeding::DEFAULT_SA_STEPS)]
    sa_steps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    fitness: FitnessArgs,
}

impl GaArgs {
    fn config(&self, selection: Selection, init: InitMethod, crossover: Crossover) -> Result<GaConfig, Failure> {
        let config = GaConfig {
            population_size: self.pop_size,
            generations: self.generations,
            selection,
            tournament_size: self.tournament_size,
            crossover,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            elitism_count: self.elitism,
            init,
            hc_iterations: self.hc_iterations,
            sa_schedule: SaSchedule {
                initial_temperature: self.sa_temperature,
                cooling_factor: self.sa_cooling,
                steps_per_seed: self.sa_steps,
            },
            rng_seed: self.seed,
            fitness_params: self.fitness.params()?,
        };
        config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    input: CourseArgs,
    #[arg(long, default_value = "tournament")]
    selection: Selection,
    #[arg(long, default_value = "random")]
    init: InitMethod,
    #[arg(long, default_value = "cycle")]
    crossover: Crossover,
    #[command(flatten)]
    ga: GaArgs,
    /// Result JSON path; the convergence CSV is written next to it as
    /// `<stem>.convergence.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: CourseArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Seeds per cell: `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    /// Matrix CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for one convergence CSV per cell and seed.
    #[arg(long = "convergence-dir")]
    convergence_dir: Option<PathBuf>,
    /// Run cells one after another on the calling thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: CourseArgs,
    /// Comma-separated concept ids; defaults to the course order.
    #[arg(long)]
    path: Option<String>,
    #[command(flatten)]
    fitness: FitnessArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    input: CourseArgs,
    #[command(flatten)]
    fitness: FitnessArgs,
}

#[derive(Debug)]
enum Failure {
    Data(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Data(_) => EXIT_DATA,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Data(m) | Failure::Usage(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

fn ga_failure(e: GaError) -> Failure {
    match e {
        GaError::InvalidConfig(_) | GaError::TournamentSize { .. } => Failure::Usage(e.to_string()),
        other => Failure::Data(other.to_string()),
    }
}

fn load(input: &CourseArgs) -> Result<Course, Failure> {
    Course::load(&input.course, &input.rdm).map_err(data)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Data(format!("cannot create {}: {e}", path.display())))
}

/// `result.json` -> `result.convergence.csv`.
pub fn convergence_path(out: &Path) -> PathBuf {
    out.with_extension("convergence.csv")
}

fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let config = args.ga.config(args.selection, args.init, args.crossover)?;
    let course = load(&args.input)?;
    let result = experiment::run_once(&course, &config).map_err(ga_failure)?;

    if let Some(out) = &args.out {
        let traditional = course.traditional_path();
        let report = RunReport {
            config: &config,
            concept_count: course.len(),
            traditional_fitness: fitness::evaluate(&traditional, &course, &config.fitness_params)
                .map_err(data)?
                .value,
            traditional_path: traditional,
            result: &result,
        };
        let mut json = create(out)?;
        serde_json::to_writer_pretty(&mut json, &report).map_err(data)?;
        writeln!(json).and_then(|_| json.flush()).map_err(data)?;
        let conv_path = convergence_path(out);
        experiment::write_convergence_csv(&result, create(&conv_path)?).map_err(data)?;
    }

    writeln!(stdout, "first_fitness: {:.2}", fitness::round_half_up(result.first_fitness)).map_err(data)?;
    writeln!(stdout, "last_fitness: {:.2}", fitness::round_half_up(result.last_fitness)).map_err(data)?;
    writeln!(stdout, "best_path: {}", result.best_path).map_err(data)?;
    Ok(())
}

fn cmd_matrix(args: &MatrixArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.repeats == 0 {
        return Err(Failure::Usage("--repeats must be at least 1".into()));
    }
    let base = args.ga.config(Selection::default(), InitMethod::default(), Crossover::default())?;
    let course = load(&args.input)?;
    let seeds: Vec<u64> = (0..args.repeats).map(|i| args.ga.seed.wrapping_add(i)).collect();
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let report = experiment::run_matrix(&course, &base, &seeds, exec).map_err(ga_failure)?;

    match &args.out {
        Some(out) => report.write_csv(create(out)?).map_err(data)?,
        None => report.write_csv(&mut *stdout).map_err(data)?,
    }
    if let Some(dir) = &args.convergence_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("cannot create {}: {e}", dir.display())))?;
        for row in &report.rows {
            for run in &row.runs {
                let name = format!(
                    "{}_{}_{}_seed{}.csv",
                    row.cell.selection, row.cell.init, row.cell.crossover, run.seed
                );
                experiment::write_convergence_csv(&run.result, create(&dir.join(name))?).map_err(data)?;
            }
        }
    }
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let params = args.fitness.params()?;
    let course = load(&args.input)?;
    let path = match &args.path {
        Some(text) => text.parse::<LearningPath>().map_err(data)?,
        None => course.traditional_path(),
    };
    writeln!(stdout, "path: {path}").map_err(data)?;
    // selected variant first
    let mut variants = FitnessVariant::ALL;
    if variants[0] != params.variant() {
        variants.swap(0, 1);
    }
    for variant in variants {
        let p = FitnessParams::new(params.w(), variant).map_err(data)?;
        let score = fitness::evaluate(&path, &course, &p).map_err(data)?;
        writeln!(stdout, "{variant} (w={}): {:.2}", params.w(), score.reported).map_err(data)?;
    }
    Ok(())
}

fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let params = args.fitness.params()?;
    let course = load(&args.input)?;
    let result = oracle::exhaustive_best(&course, &params).map_err(data)?;
    writeln!(stdout, "best_path: {}", result.best_path).map_err(data)?;
    writeln!(stdout, "best_fitness: {:.2}", fitness::round_half_up(result.best_fitness)).map_err(data)?;
    writeln!(stdout, "evaluated: {}", result.evaluated_count).map_err(data)?;
    Ok(())
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Run(a) => cmd_run(a, stdout),
        Command::Matrix(a) => cmd_matrix(a, stdout),
        Command::Evaluate(a) => cmd_evaluate(a, stdout),
        Command::Oracle(a) => cmd_oracle(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_sits_next_to_json() {
        assert_eq!(convergence_path(Path::new("out/r.json")), PathBuf::from("out/r.convergence.csv"));
        assert_eq!(convergence_path(Path::new("r")), PathBuf::from("r.convergence.csv"));
    }

    #[test]
    fn bad_enum_value_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            ["pathga", "run", "--course", "a", "--rdm", "b", "--selection", "rank"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("rank"));
    }

    #[test]
    fn help_exits_zero() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["pathga", "--help"], &mut out, &mut err), EXIT_OK);
        assert!(String::from_utf8(out).unwrap().contains("matrix"));
    }
}
