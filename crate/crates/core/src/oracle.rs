//! Membership black boxes and their composition into the operator that
//! marks entries common to every database.
//!
//! Each database is a black box flipping a dedicated mark qubit on the
//! branches whose search index it contains. The composed oracle runs
//! every black box once, flips the common-flag qubit where all marks are
//! set, then runs every black box again; the second pass clears the
//! marks so no correlation with them survives the call. On inputs whose
//! mark qubits start cleared, the net effect is a bit flip of the flag
//! qubit exactly on the common entries.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use crate::statevector::{RegisterLayout, StateVector, MAX_QUBITS};
use crate::{Error, Result};

/// One database's membership function, materialized as its solution set.
/// The circuit path only ever issues membership queries against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlackBox {
    n: usize,
    label: String,
    solutions: BTreeSet<u64>,
}

impl BlackBox {
    /// Build a black box over `{0, 1}^n`. Duplicate entries are legal and
    /// collapse into the set; entries outside `[0, 2^n)` are rejected.
    pub fn new(
        n: usize,
        label: impl Into<String>,
        solutions: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity { qubits: n });
        }
        let limit = 1u64 << n;
        let solutions: BTreeSet<u64> = solutions.into_iter().collect();
        if let Some(bad) = solutions.iter().find(|&&x| x >= limit) {
            return Err(Error::Domain(format!(
                "solution index {bad} does not fit in {n} bits (limit {limit})"
            )));
        }
        Ok(Self {
            n,
            label: label.into(),
            solutions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn solutions(&self) -> &BTreeSet<u64> {
        &self.solutions
    }

    /// The membership query `f(entry)`.
    pub fn contains(&self, entry: u64) -> bool {
        self.solutions.contains(&entry)
    }
}

/// A set of `kappa >= 2` black boxes sharing one input width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    n: usize,
    black_boxes: Vec<BlackBox>,
}

impl ProblemInstance {
    pub fn new(black_boxes: Vec<BlackBox>) -> Result<Self> {
        if black_boxes.len() < 2 {
            return Err(Error::Domain(format!(
                "an instance needs at least 2 black boxes, got {}",
                black_boxes.len()
            )));
        }
        let n = black_boxes[0].n();
        if let Some(other) = black_boxes.iter().find(|b| b.n() != n) {
            return Err(Error::Domain(format!(
                "all black boxes must share one input width: {} has {} bits, expected {n}",
                other.label(),
                other.n()
            )));
        }
        let mut labels = BTreeSet::new();
        for b in &black_boxes {
            if !labels.insert(b.label()) {
                return Err(Error::Domain(format!(
                    "duplicate black-box label {:?}: invocation counts are kept per label",
                    b.label()
                )));
            }
        }
        Ok(Self { n, black_boxes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> usize {
        self.black_boxes.len()
    }

    pub fn num_entries(&self) -> u64 {
        1 << self.n
    }

    pub fn black_boxes(&self) -> &[BlackBox] {
        &self.black_boxes
    }

    pub fn labels(&self) -> Vec<String> {
        self.black_boxes.iter().map(|b| b.label().to_string()).collect()
    }

    /// Register layout for this instance; fails if the total width
    /// `n + kappa + 1` exceeds capacity.
    pub fn layout(&self) -> Result<RegisterLayout> {
        RegisterLayout::new(self.n, self.kappa())
    }
}

/// Control/target placement of a black-box application: controls on the
/// search qubits, target on one mark qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleWiring {
    controls: Range<usize>,
    target: usize,
}

impl OracleWiring {
    pub fn new(controls: Range<usize>, target: usize) -> Result<Self> {
        if controls.contains(&target) {
            return Err(Error::Wiring(format!(
                "target qubit {target} lies inside the control range {controls:?}"
            )));
        }
        Ok(Self { controls, target })
    }

    /// Standard wiring for database `j` under `layout`.
    pub fn for_black_box(layout: &RegisterLayout, j: usize) -> Self {
        Self {
            controls: layout.search_qubits(),
            target: layout.mark_qubit(j),
        }
    }

    pub fn controls(&self) -> Range<usize> {
        self.controls.clone()
    }

    pub fn target(&self) -> usize {
        self.target
    }
}

/// Per-label black-box call counts plus the conjunction-operator count.
/// Counts only ever increase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvocationCounter {
    per_black_box: BTreeMap<String, u64>,
    conjunction_calls: u64,
}

impl InvocationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_black_box(&mut self, label: &str) {
        *self.per_black_box.entry(label.to_string()).or_insert(0) += 1;
    }

    pub fn record_conjunction(&mut self) {
        self.conjunction_calls += 1;
    }

    pub fn black_box_calls(&self, label: &str) -> u64 {
        self.per_black_box.get(label).copied().unwrap_or(0)
    }

    pub fn per_black_box(&self) -> &BTreeMap<String, u64> {
        &self.per_black_box
    }

    pub fn conjunction_calls(&self) -> u64 {
        self.conjunction_calls
    }

    /// Total underlying black-box invocations across the run.
    pub fn total_black_box_calls(&self) -> u64 {
        self.per_black_box.values().sum()
    }
}

/// Entries contained in every black box of the instance, by set
/// intersection. The classical scan in [`crate::classical`] recomputes
/// this through an independent counting path.
pub fn common_solution_set(instance: &ProblemInstance) -> BTreeSet<u64> {
    let mut boxes = instance.black_boxes().iter();
    let first = boxes
        .next()
        .expect("instances always hold at least two black boxes")
        .solutions()
        .clone();
    boxes.fold(first, |acc, b| &acc & b.solutions())
}

/// Apply one black box: XOR its membership bit into the wired mark qubit
/// on every branch, and count the invocation (empty boxes still count).
pub fn apply_black_box(
    state: &mut StateVector,
    black_box: &BlackBox,
    wiring: &OracleWiring,
    counter: &mut InvocationCounter,
) -> Result<()> {
    let n = black_box.n();
    if wiring.controls() != (0..n) {
        return Err(Error::Wiring(format!(
            "black box {:?} must be controlled by the {n} search qubits, got {:?}",
            black_box.label(),
            wiring.controls()
        )));
    }
    let num_qubits = state.num_qubits();
    if num_qubits < n + 2 {
        return Err(Error::Wiring(format!(
            "register of {num_qubits} qubits is too narrow for {n} search qubits plus ancillas"
        )));
    }
    let target = wiring.target();
    if target < n || target >= num_qubits - 1 {
        return Err(Error::Wiring(format!(
            "black-box target {target} must be a mark qubit in {n}..{}",
            num_qubits - 1
        )));
    }
    let shift = num_qubits - n;
    counter.record_black_box(black_box.label());
    state.controlled_flip(|basis| black_box.contains((basis >> shift) as u64), target)?;
    Ok(())
}

/// Flip the common-flag qubit on every branch whose `kappa` mark qubits
/// are all set (the AND of the per-database marks).
pub fn apply_conjunction(
    state: &mut StateVector,
    kappa: usize,
    counter: &mut InvocationCounter,
) -> Result<()> {
    let num_qubits = state.num_qubits();
    if kappa == 0 || kappa + 2 > num_qubits {
        return Err(Error::Wiring(format!(
            "conjunction over {kappa} marks does not fit a {num_qubits}-qubit register"
        )));
    }
    let mark_mask = ((1usize << kappa) - 1) << 1;
    counter.record_conjunction();
    state.controlled_flip(|basis| basis & mark_mask == mark_mask, num_qubits - 1)?;
    Ok(())
}

/// Apply the full composed oracle: every black box, the conjunction, then
/// every black box again, in ascending database order both times. The
/// boxes of one pass share controls and target distinct marks, so they
/// commute and any order yields the same state.
///
/// On any state whose mark qubits are all cleared, the output has them
/// cleared again and the flag qubit XOR-ed with "entry is common" on each
/// branch. Each black-box counter advances by exactly 2, the conjunction
/// counter by 1.
pub fn apply_composed_oracle(
    state: &mut StateVector,
    instance: &ProblemInstance,
    counter: &mut InvocationCounter,
) -> Result<()> {
    let layout = instance.layout()?;
    if state.num_qubits() != layout.num_qubits() {
        return Err(Error::Wiring(format!(
            "instance needs a {}-qubit register, state has {}",
            layout.num_qubits(),
            state.num_qubits()
        )));
    }
    for (j, black_box) in instance.black_boxes().iter().enumerate() {
        apply_black_box(state, black_box, &OracleWiring::for_black_box(&layout, j), counter)?;
    }
    apply_conjunction(state, layout.kappa(), counter)?;
    for (j, black_box) in instance.black_boxes().iter().enumerate() {
        apply_black_box(state, black_box, &OracleWiring::for_black_box(&layout, j), counter)?;
    }
    Ok(())
}

/// Probability mass on basis states whose `kappa` mark qubits are all
/// zero. After every composed-oracle call this must be 1 within `1e-10`,
/// otherwise the marks stayed entangled with the search register.
pub fn mark_reset_probability(state: &StateVector, kappa: usize) -> f64 {
    let mark_mask = ((1usize << kappa) - 1) << 1;
    state.probability_of(|basis| basis & mark_mask == 0)
}
