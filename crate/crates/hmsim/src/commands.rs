//! The `hmsim` subcommands. Every command writes one report to `out`,
//! diagnostics to `err`, and returns the process exit code.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hmsim_core::dichotomic::{
    bloch_of_qubit, continuous_probability, diagonal_coordinate, dyadic_partial_sum, qubit_from_angles, BlochVector,
    DyadicRule,
};
use hmsim_core::hilbert::{born_probability, Projector};
use hmsim_core::history::{history_probability, trajectory, Convention, HistoryOutcome, HomogeneousHistory};
use hmsim_core::sampler::{DichotomicModel, FrequencySummary, HistoryRun, RandomSource, DEFAULT_SEED};
use hmsim_core::verify::exact_check;

use crate::edl::{self, EdlError, Experiment};
use crate::json;
use crate::parallel;
use crate::report::{Format, Report, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest accepted `--L` and `--lambda-max`.
pub const MAX_DEPTH: u32 = 60;

/// Probabilities computed in floating point may leave `[0, 1]` by rounding.
const PROBABILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "hmsim",
    version,
    about = "Hidden-measurement simulations of dichotomic questions and histories"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct Options {
    /// Seed of the random generator.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo trials per sampled row; 0 disables sampling in `sphere` and `history`.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub trials: u64,
    /// Largest contextual value drawn by the discrete models.
    #[arg(long = "lambda-max", global = true, default_value_t = 60)]
    pub lambda_max: u32,
    /// Enumeration depth of the exact checks.
    #[arg(long = "L", global = true, default_value_t = 40)]
    pub depth: u32,
    /// History probability convention used by `verify`.
    #[arg(long, global = true, value_enum, default_value = "lueders")]
    pub convention: ConventionArg,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Omit the generation timestamp from reports.
    #[arg(long = "no-timestamp", global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConventionArg {
    Lueders,
    Literal,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Lueders => Convention::Lueders,
            ConventionArg::Literal => Convention::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelArg {
    Continuous,
    Greedy,
    Geometric,
}

impl From<ModelArg> for DichotomicModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Continuous => DichotomicModel::Continuous,
            ModelArg::Greedy => DichotomicModel::Greedy,
            ModelArg::Geometric => DichotomicModel::Geometric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Exact partial-sum check of the dyadic models.
    Verify {
        /// EDL file (`-` for stdin) whose probabilities are checked.
        input: Option<PathBuf>,
        /// A bare probability to check instead of a file.
        #[arg(long = "p", conflicts_with = "input", allow_negative_numbers = true)]
        p: Option<f64>,
    },
    /// Compare Born, sphere and dyadic models for a qubit at polar angle theta.
    Sphere {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Probabilities, samples and trajectories of a named history.
    History {
        input: PathBuf,
        /// A history or orhistory declared in the file.
        #[arg(long)]
        name: String,
        /// The initial state, declared in the file.
        #[arg(long)]
        state: String,
    },
    /// Monte Carlo run of one dichotomic model.
    Sample {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Probability of the answer alpha.
        #[arg(long = "p", allow_negative_numbers = true)]
        p: f64,
    },
    /// Parse and elaborate an EDL file.
    ParseCheck {
        input: PathBuf,
        /// Print the elaborated experiment as JSON.
        #[arg(long)]
        dump: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Sphere { .. } => "sphere",
            Command::History { .. } => "history",
            Command::Sample { .. } => "sample",
            Command::ParseCheck { .. } => "parse-check",
        }
    }
}

/// A failure that ends the command with exit code 2.
struct Usage(String);

impl From<hmsim_core::Error> for Usage {
    fn from(e: hmsim_core::Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult<T> = Result<T, Usage>;

fn clamp_probability(p: f64) -> f64 {
    if (-PROBABILITY_SLACK..0.0).contains(&p) {
        0.0
    } else if p > 1.0 && p <= 1.0 + PROBABILITY_SLACK {
        1.0
    } else {
        p
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> CmdResult<(String, String)> {
    let label = path.display().to_string();
    let mut text = String::new();
    let read = if label == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Usage(format!("{label}: {e}")))?;
    Ok((if label == "-" { "<stdin>".into() } else { label }, text))
}

fn load_experiment(path: &PathBuf, stdin: &mut dyn Read, err: &mut dyn Write) -> CmdResult<Experiment> {
    let (label, text) = read_input(path, stdin)?;
    let ex = edl::load(&text).map_err(|e| {
        let pos = e.pos();
        let message = match &e {
            EdlError::Parse(p) => p.message.clone(),
            EdlError::Elaborate(el) => el.message.clone(),
        };
        Usage(format!("{label}:{}:{}: {message}", pos.line, pos.column))
    })?;
    for w in &ex.warnings {
        // Diagnostics are best effort.
        let _ = writeln!(err, "warning: {label}:{}:{}: {}", w.pos.line, w.pos.column, w.message);
    }
    Ok(ex)
}

fn sample_columns(summary: Option<FrequencySummary>) -> [Value; 4] {
    match summary {
        Some(s) => [
            s.n_trials.into(),
            s.count_alpha.into(),
            s.frequency().into(),
            s.z_score.into(),
        ],
        None => [Value::Empty, Value::Empty, Value::Empty, Value::Empty],
    }
}

/// Runs one command; `out` receives the report.
pub fn execute(config: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let opts = &config.options;
    let result = validate(config).and_then(|()| match &config.command {
        Command::Verify { input, p } => verify(opts, input.as_ref(), *p, stdin, err),
        Command::Sphere { theta } => sphere(opts, *theta),
        Command::History { input, name, state } => history(opts, input, name, state, stdin, err),
        Command::Sample { model, p } => sample(opts, (*model).into(), *p),
        Command::ParseCheck { input, dump } => parse_check(input, *dump, stdin, out, err),
    });
    match result {
        Ok(Some((report, failed))) => {
            let timestamp =
                (!opts.no_timestamp).then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
            if let Err(e) = report.write(&mut *out, opts.format, timestamp.as_deref()) {
                let _ = writeln!(err, "error: writing report: {e}");
                return EXIT_USAGE;
            }
            if failed {
                let _ = writeln!(err, "{}: quantitative check failed", config.command.name());
                EXIT_CHECK_FAILED
            } else {
                EXIT_OK
            }
        }
        Ok(None) => EXIT_OK,
        Err(Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

fn validate(config: &RunConfig) -> CmdResult<()> {
    let o = &config.options;
    if !(1..=MAX_DEPTH).contains(&o.depth) {
        return Err(Usage(format!("--L must lie in 1..={MAX_DEPTH}, got {}", o.depth)));
    }
    if !(1..=MAX_DEPTH).contains(&o.lambda_max) {
        return Err(Usage(format!(
            "--lambda-max must lie in 1..={MAX_DEPTH}, got {}",
            o.lambda_max
        )));
    }
    if o.trials == 0 && matches!(config.command, Command::Sample { .. }) {
        return Err(Usage("--trials must be at least 1".into()));
    }
    Ok(())
}

type Outcome = CmdResult<Option<(Report, bool)>>;

/// Targets checked by `verify` for an EDL file: the Born probability of
/// every projector on every state of its space, and every history or
/// orhistory whose slots all live in the state's space.
fn experiment_targets(ex: &Experiment, convention: Convention) -> CmdResult<Vec<(String, f64)>> {
    let mut targets = Vec::new();
    for (s_name, s) in &ex.states {
        for (p_name, p) in ex.projectors.iter().filter(|(_, p)| p.space == s.space) {
            targets.push((
                format!("born({p_name}|{s_name})"),
                born_probability(&s.vector, &p.projector)?,
            ));
        }
        let on_space = |names: &[String]| names.iter().all(|n| ex.projectors[n].space == s.space);
        for (h_name, h) in ex.histories.iter().filter(|(_, h)| on_space(&h.projectors)) {
            targets.push((
                format!("{h_name}|{s_name}"),
                history_probability(&s.vector, &h.history, convention)?,
            ));
        }
        for (o_name, o) in &ex.orhistories {
            if o.branches.iter().all(|b| on_space(&ex.histories[b].projectors)) {
                let p = hmsim_core::history::inhomogeneous_probability(&s.vector, &o.history, convention)?;
                targets.push((format!("{o_name}|{s_name}"), p));
            }
        }
    }
    Ok(targets)
}

fn verify(
    opts: &Options,
    input: Option<&PathBuf>,
    p: Option<f64>,
    stdin: &mut dyn Read,
    err: &mut dyn Write,
) -> Outcome {
    let targets = match (input, p) {
        (_, Some(p)) => vec![("p".to_string(), p)],
        (Some(path), None) => {
            let ex = load_experiment(path, stdin, err)?;
            experiment_targets(&ex, opts.convention.into())?
                .into_iter()
                .map(|(name, p)| (name, clamp_probability(p)))
                .collect()
        }
        (None, None) => return Err(Usage("verify needs an input file or --p".into())),
    };
    let mut report = Report::new(
        "verify",
        &[
            "target",
            "rule",
            "p",
            "L",
            "partial_sum",
            "abs_error",
            "bound_satisfied",
        ],
    );
    let mut failed = false;
    for (name, p) in targets {
        for rule in [DyadicRule::Greedy, DyadicRule::Geometric] {
            let check = exact_check(p, opts.depth, rule)?;
            failed |= !check.bound_satisfied;
            report.push(vec![
                name.as_str().into(),
                rule.name().into(),
                p.into(),
                opts.depth.into(),
                check.partial_sum.into(),
                check.abs_error.into(),
                check.bound_satisfied.into(),
            ]);
        }
    }
    Ok(Some((report, failed)))
}

fn sphere(opts: &Options, theta: f64) -> Outcome {
    if !(0.0..=PI).contains(&theta) {
        return Err(Usage(format!("--theta must lie in [0, pi], got {theta}")));
    }
    let state = qubit_from_angles(theta, 0.0);
    let born = born_probability(&state, &Projector::basis_span(2, &[0])?)?;
    let alpha = BlochVector::new(0.0, 0.0, 1.0)?;
    let continuous = continuous_probability(diagonal_coordinate(&bloch_of_qubit(&state)?, &alpha));
    let p = clamp_probability(born);
    let mut report = Report::new(
        "sphere",
        &[
            "model",
            "theta",
            "probability",
            "n_trials",
            "count_alpha",
            "frequency",
            "z_score",
        ],
    );
    let mut failed = false;
    report.push(
        [Value::from("born"), theta.into(), born.into()]
            .into_iter()
            .chain(sample_columns(None))
            .collect(),
    );
    let rows = [
        (DichotomicModel::Continuous, continuous),
        (
            DichotomicModel::Greedy,
            dyadic_partial_sum(p, opts.depth, DyadicRule::Greedy)?.to_f64(),
        ),
        (
            DichotomicModel::Geometric,
            dyadic_partial_sum(p, opts.depth, DyadicRule::Geometric)?.to_f64(),
        ),
    ];
    for (stream, (model, probability)) in rows.into_iter().enumerate() {
        let summary = if opts.trials > 0 {
            let source = RandomSource::new(opts.seed, stream as u64);
            let s = parallel::run_dichotomic(model, p, opts.trials, opts.lambda_max, &source)?;
            failed |= !s.passes();
            Some(s)
        } else {
            None
        };
        report.push(
            [Value::from(model.name()), theta.into(), probability.into()]
                .into_iter()
                .chain(sample_columns(summary))
                .collect(),
        );
    }
    Ok(Some((report, failed)))
}

fn history(
    opts: &Options,
    input: &PathBuf,
    name: &str,
    state: &str,
    stdin: &mut dyn Read,
    err: &mut dyn Write,
) -> Outcome {
    let ex = load_experiment(input, stdin, err)?;
    let initial = &ex
        .states
        .get(state)
        .ok_or_else(|| Usage(format!("unknown state '{state}'")))?
        .vector;
    let branches: Vec<(&str, &HomogeneousHistory)> = if let Some(h) = ex.histories.get(name) {
        vec![(name, &h.history)]
    } else if let Some(o) = ex.orhistories.get(name) {
        o.branches
            .iter()
            .map(|b| (b.as_str(), &ex.histories[b].history))
            .collect()
    } else {
        return Err(Usage(format!("unknown history '{name}'")));
    };
    let total_row = ex.orhistories.contains_key(name);
    let mut report = Report::new(
        "history",
        &[
            "name",
            "branch",
            "convention",
            "probability",
            "n_trials",
            "count_alpha",
            "frequency",
            "z_score",
            "trajectory",
        ],
    );
    let mut failed = false;
    let mut stream = 0u64;
    let mut sampled = |probability: f64| -> CmdResult<Option<FrequencySummary>> {
        let summary = if opts.trials > 0 {
            let run = HistoryRun::from_probability(clamp_probability(probability), opts.lambda_max)?;
            let s = parallel::run_history(&run, opts.trials, &RandomSource::new(opts.seed, stream))?;
            failed |= !s.passes();
            Some(s)
        } else {
            None
        };
        stream += 1;
        Ok(summary)
    };
    for convention in [Convention::Lueders, Convention::Literal] {
        let mut total = 0.0;
        for &(branch, h) in &branches {
            let probability = history_probability(initial, h, convention)?;
            total += probability;
            let path = if probability > 0.0 {
                trajectory(initial, h, HistoryOutcome::Affirmed)?
            } else {
                None
            };
            let path: Value = path.map(|states| json::vectors(&states).to_string()).into();
            report.push(
                [
                    Value::from(name),
                    branch.into(),
                    convention.name().into(),
                    probability.into(),
                ]
                .into_iter()
                .chain(sample_columns(sampled(probability)?))
                .chain([path])
                .collect(),
            );
        }
        if total_row {
            report.push(
                [
                    Value::from(name),
                    "total".into(),
                    convention.name().into(),
                    total.into(),
                ]
                .into_iter()
                .chain(sample_columns(sampled(total)?))
                .chain([Value::Empty])
                .collect(),
            );
        }
    }
    Ok(Some((report, failed)))
}

fn sample(opts: &Options, model: DichotomicModel, p: f64) -> Outcome {
    let source = RandomSource::new(opts.seed, 0);
    let s = parallel::run_dichotomic(model, p, opts.trials, opts.lambda_max, &source)?;
    let mut report = Report::new(
        "sample",
        &[
            "model",
            "p",
            "lambda_max",
            "n_trials",
            "count_alpha",
            "frequency",
            "z_score",
        ],
    );
    report.push(
        [Value::from(model.name()), p.into(), opts.lambda_max.into()]
            .into_iter()
            .chain(sample_columns(Some(s)))
            .collect(),
    );
    Ok(Some((report, !s.passes())))
}

fn parse_check(input: &PathBuf, dump: bool, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let ex = load_experiment(input, stdin, err)?;
    if dump {
        let text = serde_json::to_string_pretty(&json::experiment(&ex)).expect("JSON values serialize");
        writeln!(out, "{text}").map_err(|e| Usage(format!("writing output: {e}")))?;
    }
    Ok(None)
}
