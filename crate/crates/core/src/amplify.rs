//! Amplitude amplification: the partial diffusion operator driving the
//! search, a standard inversion-about-the-mean baseline for comparison,
//! and the end-to-end run loops.
//!
//! Partial diffusion acts on the search qubits plus the common-flag
//! qubit, leaving the mark qubits alone: conjugated by Hadamards on the
//! search register, it keeps the all-zero component of that factor and
//! negates every other one. Net effect per loop pass: inversion about
//! the mean on the flag-clear subspace and a sign flip on the flag-set
//! subspace. That split keeps the loop reliable for any number of
//! common entries, where plain inversion about the mean degrades past
//! `M > 3N/4`.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::oracle::{
    apply_composed_oracle, common_solution_set, mark_reset_probability, InvocationCounter,
    ProblemInstance,
};
use crate::report::{InstanceSummary, RunReport, ScheduleSummary};
use crate::statevector::{RegisterLayout, StateVector};
use crate::analytics::IterationSchedule;
use crate::{Error, Result};

/// Which amplification operator a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplifierKind {
    /// Diffusion over the search qubits plus the flag qubit.
    PartialDiffusion,
    /// Standard inversion about the mean over the search qubits only.
    GroverInversion,
}

/// Mass allowed to leak onto set mark qubits before a run aborts.
const MARK_LEAK_TOLERANCE: f64 = 1e-10;

/// Squared-norm sums can overshoot [0, 1] by a few ulps; fold that back
/// so reported probabilities honor their range.
fn clamp_probability(p: f64) -> f64 {
    debug_assert!((-1e-9..=1.0 + 1e-9).contains(&p), "probability {p} far outside [0, 1]");
    p.clamp(0.0, 1.0)
}

/// Apply the partial diffusion operator for `layout`.
///
/// Equals `(H_search ⊗ I)(2|0><0| - I)(H_search ⊗ I)` where the projector
/// lives on the search-plus-flag factor; the mark qubits are untouched.
pub fn apply_partial_diffusion(state: &mut StateVector, layout: &RegisterLayout) -> Result<()> {
    if state.num_qubits() != layout.num_qubits() {
        return Err(Error::Wiring(format!(
            "partial diffusion for a {}-qubit layout applied to a {}-qubit register",
            layout.num_qubits(),
            state.num_qubits()
        )));
    }
    let shift = layout.kappa() + 1;
    state.hadamard_layer(layout.search_qubits())?;
    // 2|0><0| - I on (search, flag): negate everything except components
    // with a zero search index and a clear flag, whatever the marks.
    state.phase_flip(move |basis| (basis >> shift) != 0 || basis & 1 == 1);
    state.hadamard_layer(layout.search_qubits())?;
    Ok(())
}

/// Standard inversion about the mean on the first `n` qubits.
pub fn apply_grover_diffusion(state: &mut StateVector, n: usize) -> Result<()> {
    if n == 0 || n > state.num_qubits() {
        return Err(Error::Wiring(format!(
            "diffusion over {n} qubits does not fit a {}-qubit register",
            state.num_qubits()
        )));
    }
    let shift = state.num_qubits() - n;
    state.hadamard_layer(0..n)?;
    state.phase_flip(move |basis| (basis >> shift) != 0);
    state.hadamard_layer(0..n)?;
    Ok(())
}

/// Run the amplified common-entry search: zero the register, superpose
/// the search qubits, iterate (composed oracle, partial diffusion), then
/// sample. The report carries exact success probability, per-oracle
/// invocation counts, and the analytic predictions side by side.
pub fn run_common_entry_search(
    instance: &ProblemInstance,
    iterations: u64,
    shots: u64,
    seed: u64,
) -> Result<RunReport> {
    execute(instance, AmplifierKind::PartialDiffusion, iterations, shots, seed)
}

/// Same loop shape with phase marking of the common entries and standard
/// inversion about the mean; the comparison baseline. Callers supply the
/// prescribed iteration count (`floor((pi/4) sqrt(N/M_c))` for the
/// scheduled variant).
pub fn run_grover_baseline(
    instance: &ProblemInstance,
    iterations: u64,
    shots: u64,
    seed: u64,
) -> Result<RunReport> {
    execute(instance, AmplifierKind::GroverInversion, iterations, shots, seed)
}

/// Final state of a search loop, before measurement.
pub struct LoopOutcome {
    pub state: StateVector,
    pub layout: RegisterLayout,
    pub common: BTreeSet<u64>,
    pub counter: InvocationCounter,
}

impl LoopOutcome {
    /// Probability of reading a common entry off the search qubits,
    /// counting both flag values.
    pub fn success_probability(&self) -> f64 {
        let shift = self.layout.kappa() + 1;
        let common = &self.common;
        self.state
            .probability_of(|basis| common.contains(&((basis >> shift) as u64)))
    }
}

/// Drive the loop without sampling; the sweep driver and the test suites
/// use this to read exact probabilities.
pub fn run_loop(
    instance: &ProblemInstance,
    amplifier: AmplifierKind,
    iterations: u64,
) -> Result<LoopOutcome> {
    let layout = instance.layout()?;
    let common = common_solution_set(instance);
    let mut state = StateVector::new(layout.num_qubits())?;
    state.hadamard_layer(layout.search_qubits())?;
    let mut counter = InvocationCounter::new();
    let shift = layout.kappa() + 1;
    for _ in 0..iterations {
        match amplifier {
            AmplifierKind::PartialDiffusion => {
                apply_composed_oracle(&mut state, instance, &mut counter)?;
                let leak = 1.0 - mark_reset_probability(&state, layout.kappa());
                if leak > MARK_LEAK_TOLERANCE {
                    return Err(Error::Internal(format!(
                        "mark qubits kept {leak:.3e} probability mass after the oracle's reset pass"
                    )));
                }
                apply_partial_diffusion(&mut state, &layout)?;
            }
            AmplifierKind::GroverInversion => {
                // Phase marking derived from the conjunction of the
                // membership functions; counted as one conjunction call.
                counter.record_conjunction();
                state.phase_flip(|basis| common.contains(&((basis >> shift) as u64)));
                apply_grover_diffusion(&mut state, layout.n())?;
            }
        }
    }
    Ok(LoopOutcome {
        state,
        layout,
        common,
        counter,
    })
}

fn execute(
    instance: &ProblemInstance,
    amplifier: AmplifierKind,
    iterations: u64,
    shots: u64,
    seed: u64,
) -> Result<RunReport> {
    let start = Instant::now();
    let outcome = run_loop(instance, amplifier, iterations)?;
    let exact_success = clamp_probability(outcome.success_probability());

    let mut frequencies: BTreeMap<u64, u64> = BTreeMap::new();
    for sample in outcome.state.sample(&outcome.layout, shots, seed)? {
        *frequencies.entry(sample.first_n_bits).or_insert(0) += 1;
    }

    let schedule = match IterationSchedule::new(instance.num_entries(), outcome.common.len() as u64)
    {
        Ok(s) => Some(ScheduleSummary::new(&s, instance.kappa())),
        Err(Error::NoCommonEntries) => None,
        Err(e) => return Err(e),
    };

    Ok(RunReport {
        instance: InstanceSummary::from(instance),
        amplifier,
        schedule,
        iterations,
        shots,
        seed,
        frequencies,
        exact_success,
        counters: outcome.counter,
        duration_secs: start.elapsed().as_secs_f64(),
    })
}
