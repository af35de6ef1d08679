//! Run and sweep reports, plus the synthetic-instance sweep driver used
//! by the command-line harness and the acceptance suite.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::amplify::{run_common_entry_search, run_grover_baseline, AmplifierKind};
use crate::analytics::IterationSchedule;
use crate::oracle::{BlackBox, InvocationCounter, ProblemInstance};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub kappa: usize,
    pub labels: Vec<String>,
}

impl From<&ProblemInstance> for InstanceSummary {
    fn from(instance: &ProblemInstance) -> Self {
        Self {
            n: instance.n(),
            kappa: instance.kappa(),
            labels: instance.labels(),
        }
    }
}

/// The analytic predictions attached to a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub num_entries: u64,
    pub common_count: u64,
    pub theta: f64,
    pub iterations: u64,
    pub predicted_success: f64,
    /// Query-cost bound for this instance's `kappa`.
    pub oracle_call_bound: f64,
}

impl ScheduleSummary {
    pub fn new(schedule: &IterationSchedule, kappa: usize) -> Self {
        Self {
            num_entries: schedule.num_entries(),
            common_count: schedule.common_count(),
            theta: schedule.theta(),
            iterations: schedule.iterations(),
            predicted_success: schedule.predicted_success(),
            oracle_call_bound: schedule.oracle_call_bound(kappa),
        }
    }
}

/// Everything one simulated run produced, next to what the closed forms
/// predicted for it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: InstanceSummary,
    pub amplifier: AmplifierKind,
    /// Analytic predictions; absent when the instance has no common
    /// entries (the run then needs an explicit iteration count).
    pub schedule: Option<ScheduleSummary>,
    /// Iterations actually executed.
    pub iterations: u64,
    pub shots: u64,
    pub seed: u64,
    /// Measured search-register outcomes: value read off the first `n`
    /// qubits mapped to its observed count. Counts sum to `shots`.
    pub frequencies: BTreeMap<u64, u64>,
    /// Probability of measuring a common entry, computed exactly from the
    /// final state (both flag values counted).
    pub exact_success: f64,
    pub counters: InvocationCounter,
    pub duration_secs: f64,
}

impl RunReport {
    /// Total observed count over a set of search outcomes.
    pub fn frequency_of(&self, entries: &BTreeSet<u64>) -> u64 {
        entries
            .iter()
            .map(|e| self.frequencies.get(e).copied().unwrap_or(0))
            .sum()
    }

    pub fn total_shots_recorded(&self) -> u64 {
        self.frequencies.values().sum()
    }
}

/// One sweep configuration and its outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub num_entries: u64,
    pub common_count: u64,
    /// Scheduled iteration count for the amplified search.
    pub iterations: u64,
    pub analytic_success: f64,
    pub simulated_success: f64,
    /// Prescribed iteration count for the inversion-about-the-mean
    /// baseline, when requested.
    pub grover_iterations: Option<u64>,
    pub grover_success: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub kappa: usize,
    pub rows: Vec<SweepRow>,
}

/// Which common counts to cover at each register width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommonCountStrategy {
    /// Every `M_c` in `1..=N`.
    Exhaustive,
    /// An explicit list; values outside `1..=N` are skipped at that width.
    Listed(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub kappa: usize,
    pub common_counts: CommonCountStrategy,
    /// Add the standard-diffusion baseline columns.
    pub include_grover: bool,
}

/// Deterministic instance with exactly `common_count` common entries:
/// entries below `common_count` go into every database, every other entry
/// into exactly one (round-robin), so the intersection is exact and each
/// database still holds entries of its own.
pub fn synthetic_instance(n: usize, kappa: usize, common_count: u64) -> Result<ProblemInstance> {
    let num_entries = 1u64 << n;
    if common_count > num_entries {
        return Err(Error::Domain(format!(
            "cannot place {common_count} common entries among {num_entries}"
        )));
    }
    let boxes = (0..kappa)
        .map(|j| {
            let solutions = (0..common_count)
                .chain((common_count..num_entries).filter(|x| (x % kappa as u64) == j as u64));
            BlackBox::new(n, format!("db{j}"), solutions)
        })
        .collect::<Result<Vec<_>>>()?;
    ProblemInstance::new(boxes)
}

/// Run every configured `(N, M_c)` pair at its schedule and tabulate
/// analytic vs simulated success, plus the baseline when requested.
/// Rows are ordered by `(n, M_c)` regardless of execution order.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let mut rows = Vec::new();
    for n in config.n_min..=config.n_max {
        let num_entries = 1u64 << n;
        let m_values: Vec<u64> = match &config.common_counts {
            CommonCountStrategy::Exhaustive => (1..=num_entries).collect(),
            CommonCountStrategy::Listed(list) => list
                .iter()
                .copied()
                .filter(|&m| m >= 1 && m <= num_entries)
                .collect(),
        };
        for m_c in m_values {
            rows.push(sweep_row(n, config.kappa, m_c, config.include_grover)?);
        }
    }
    Ok(SweepReport {
        kappa: config.kappa,
        rows,
    })
}

fn sweep_row(n: usize, kappa: usize, m_c: u64, include_grover: bool) -> Result<SweepRow> {
    let num_entries = 1u64 << n;
    let instance = synthetic_instance(n, kappa, m_c)?;
    let schedule = IterationSchedule::new(num_entries, m_c)?;

    // One shot: sweep rows compare exact probabilities, not samples.
    let report = run_common_entry_search(&instance, schedule.iterations(), 1, 0)?;

    let (grover_iterations, grover_success) = if include_grover {
        let q = grover_iteration_count(num_entries, m_c);
        let baseline = run_grover_baseline(&instance, q, 1, 0)?;
        (Some(q), Some(baseline.exact_success))
    } else {
        (None, None)
    };

    Ok(SweepRow {
        n,
        num_entries,
        common_count: m_c,
        iterations: schedule.iterations(),
        analytic_success: schedule.predicted_success(),
        simulated_success: report.exact_success,
        grover_iterations,
        grover_success,
    })
}

/// Prescribed iteration count for the standard-diffusion baseline,
/// `floor((pi/4) sqrt(N / M_c))`.
pub fn grover_iteration_count(num_entries: u64, common_count: u64) -> u64 {
    (std::f64::consts::FRAC_PI_4 * ((num_entries as f64) / (common_count as f64)).sqrt()).floor()
        as u64
}
