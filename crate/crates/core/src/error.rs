use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Register width outside the supported range (a 31-qubit register
    /// would already need 32 GiB of amplitudes).
    #[error("register of {qubits} qubits exceeds the supported range (1..={max})", max = crate::statevector::MAX_QUBITS)]
    Capacity { qubits: usize },

    /// Qubit indices or operator placement inconsistent with the register.
    #[error("wiring error: {0}")]
    Wiring(String),

    /// Argument outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// No entry is common to every database, so no iteration schedule
    /// exists; runs must supply an explicit iteration count instead.
    #[error("no common entries: the rotation angle is undefined for an empty common set")]
    NoCommonEntries,

    /// A state that cannot be operated on (e.g. zero norm under measurement).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An internal invariant failed during a run; reports from such a run
    /// would be meaningless.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}
