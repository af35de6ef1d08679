//! Command-line harness: load instance files, run the amplified search or
//! the classical baseline, sweep configurations, and emit reports.
//!
//! Exit codes: 0 success, 2 unreadable/invalid input, 3 instance exceeds
//! simulator capacity, 4 no common entries (so no schedule exists),
//! 5 internal invariant violation.

mod instance;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qintersect_core::amplify::{run_common_entry_search, run_grover_baseline, AmplifierKind};
use qintersect_core::analytics::IterationSchedule;
use qintersect_core::classical::classical_common_entries;
use qintersect_core::oracle::ProblemInstance;
use qintersect_core::report::{
    grover_iteration_count, run_sweep, CommonCountStrategy, InstanceSummary, RunReport,
    ScheduleSummary, SweepConfig,
};
use qintersect_core::Error as CoreError;

#[derive(Debug)]
enum CliError {
    /// Unreadable file, malformed JSON, or schema violation.
    Parse(String),
    /// Failure writing a report.
    Output(String),
    Core(CoreError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "{msg}"),
            CliError::Output(msg) => write!(f, "{msg}"),
            CliError::Core(err) => write!(f, "{err}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Core(err)
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Parse(_) => 2,
        CliError::Output(_) => 1,
        CliError::Core(CoreError::Capacity { .. }) => 3,
        CliError::Core(CoreError::NoCommonEntries) => 4,
        CliError::Core(_) => 5,
    }
}

#[derive(Parser)]
#[command(
    name = "qintersect",
    version,
    about = "Find the entries common to several unstructured databases with an amplified quantum search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a search run on an instance and report the outcome
    Run {
        /// Instance file (JSON)
        #[arg(long)]
        instance: PathBuf,
        /// Measurement shots to draw from the final state
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        /// Seed for the measurement sampler
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Amplification operator
        #[arg(long, value_enum, default_value_t = Amplifier::Partial)]
        amplifier: Amplifier,
        /// Override the scheduled iteration count
        #[arg(long)]
        iterations: Option<u64>,
        /// Report path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate analytic vs simulated success across (N, M_c) configurations
    Sweep {
        /// Smallest register width n (N = 2^n)
        #[arg(long)]
        n_min: usize,
        /// Largest register width n
        #[arg(long)]
        n_max: usize,
        /// Number of synthetic databases per instance
        #[arg(long, default_value_t = 2)]
        kappa: usize,
        /// Common counts to cover: "all" or a comma-separated list
        #[arg(long, default_value = "all")]
        mc: String,
        /// Which amplifiers to tabulate (partial columns always present)
        #[arg(long, value_enum, default_value_t = SweepAmplifier::Partial)]
        amplifier: SweepAmplifier,
        /// Report path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format
        #[arg(long, value_enum, default_value_t = Format::Doc)]
        format: Format,
    },
    /// Classical full-scan intersection with query accounting
    Intersect {
        /// Instance file (JSON)
        #[arg(long)]
        instance: PathBuf,
        /// Report path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the iteration schedule and predictions without simulating
    Analyze {
        /// Instance file (JSON)
        #[arg(long)]
        instance: PathBuf,
        /// Report path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Amplifier {
    Partial,
    Grover,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepAmplifier {
    Partial,
    Grover,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Doc,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            instance,
            shots,
            seed,
            amplifier,
            iterations,
            out,
        } => cmd_run(&instance, shots, seed, amplifier, iterations, out.as_deref()),
        Command::Sweep {
            n_min,
            n_max,
            kappa,
            mc,
            amplifier,
            out,
            format,
        } => cmd_sweep(n_min, n_max, kappa, &mc, amplifier, out.as_deref(), format),
        Command::Intersect { instance, out } => cmd_intersect(&instance, out.as_deref()),
        Command::Analyze { instance, out } => cmd_analyze(&instance, out.as_deref()),
    }
}

fn cmd_run(
    instance_path: &std::path::Path,
    shots: u64,
    seed: u64,
    amplifier: Amplifier,
    iterations_override: Option<u64>,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let instance = instance::load(instance_path)?;
    let (common, _) = classical_common_entries(&instance);
    let m_c = common.len() as u64;

    let iterations = match iterations_override {
        Some(q) => q,
        None => match amplifier {
            // Scheduling fails cleanly when nothing is common.
            Amplifier::Partial => {
                IterationSchedule::new(instance.num_entries(), m_c)?.iterations()
            }
            Amplifier::Grover => {
                if m_c == 0 {
                    return Err(CoreError::NoCommonEntries.into());
                }
                grover_iteration_count(instance.num_entries(), m_c)
            }
        },
    };

    let report = match amplifier {
        Amplifier::Partial => run_common_entry_search(&instance, iterations, shots, seed)?,
        Amplifier::Grover => run_grover_baseline(&instance, iterations, shots, seed)?,
    };
    verify_run_invariants(&instance, &report)?;
    output::emit(out, &output::json_doc(&report)?)
}

/// Bookkeeping checks on a finished run; a failure here means the report
/// cannot be trusted.
fn verify_run_invariants(instance: &ProblemInstance, report: &RunReport) -> Result<(), CliError> {
    if report.total_shots_recorded() != report.shots {
        return Err(CoreError::Internal(format!(
            "recorded frequencies sum to {} but {} shots were drawn",
            report.total_shots_recorded(),
            report.shots
        ))
        .into());
    }
    if !(0.0..=1.0).contains(&report.exact_success) {
        return Err(CoreError::Internal(format!(
            "exact success probability {} outside [0, 1]",
            report.exact_success
        ))
        .into());
    }
    match report.amplifier {
        AmplifierKind::PartialDiffusion => {
            for label in instance.labels() {
                if report.counters.black_box_calls(&label) != 2 * report.iterations {
                    return Err(CoreError::Internal(format!(
                        "black box {label:?} was invoked {} times, expected {}",
                        report.counters.black_box_calls(&label),
                        2 * report.iterations
                    ))
                    .into());
                }
            }
            if report.counters.conjunction_calls() != report.iterations {
                return Err(CoreError::Internal(format!(
                    "conjunction was invoked {} times, expected {}",
                    report.counters.conjunction_calls(),
                    report.iterations
                ))
                .into());
            }
        }
        AmplifierKind::GroverInversion => {
            if report.counters.total_black_box_calls() != 0
                || report.counters.conjunction_calls() != report.iterations
            {
                return Err(CoreError::Internal(
                    "baseline run recorded unexpected oracle invocations".into(),
                )
                .into());
            }
        }
    }
    Ok(())
}

fn cmd_sweep(
    n_min: usize,
    n_max: usize,
    kappa: usize,
    mc: &str,
    amplifier: SweepAmplifier,
    out: Option<&std::path::Path>,
    format: Format,
) -> Result<(), CliError> {
    let common_counts = if mc.trim().eq_ignore_ascii_case("all") {
        CommonCountStrategy::Exhaustive
    } else {
        let values = mc
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Parse(format!("invalid common count {part:?} in --mc")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CommonCountStrategy::Listed(values)
    };
    let report = run_sweep(&SweepConfig {
        n_min,
        n_max,
        kappa,
        common_counts,
        include_grover: amplifier != SweepAmplifier::Partial,
    })?;
    let contents = match format {
        Format::Doc => output::json_doc(&report)?,
        Format::Table => output::sweep_csv(&report),
    };
    output::emit(out, &contents)
}

#[derive(Serialize)]
struct IntersectReport {
    instance: InstanceSummary,
    common_entries: Vec<u64>,
    common_count: u64,
    total_queries: u64,
}

fn cmd_intersect(
    instance_path: &std::path::Path,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let instance = instance::load(instance_path)?;
    let (common, total_queries) = classical_common_entries(&instance);
    let report = IntersectReport {
        instance: InstanceSummary::from(&instance),
        common_count: common.len() as u64,
        common_entries: common.into_iter().collect(),
        total_queries,
    };
    output::emit(out, &output::json_doc(&report)?)
}

#[derive(Serialize)]
struct AnalyzeReport {
    instance: InstanceSummary,
    schedule: ScheduleSummary,
    /// Queries the classical scan spent establishing the common count.
    classical_queries: u64,
}

fn cmd_analyze(
    instance_path: &std::path::Path,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let instance = instance::load(instance_path)?;
    let (common, classical_queries) = classical_common_entries(&instance);
    let schedule = IterationSchedule::new(instance.num_entries(), common.len() as u64)?;
    let report = AnalyzeReport {
        instance: InstanceSummary::from(&instance),
        schedule: ScheduleSummary::new(&schedule, instance.kappa()),
        classical_queries,
    };
    output::emit(out, &output::json_doc(&report)?)
}
