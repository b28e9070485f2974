use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A specification failed validation; `field` names the offending input.
    #[error("invalid {field}: {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    /// The requested register would exceed the configured qubit cap.
    #[error("{requested} qubits exceeds the dimension cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("operator is not Hermitian (max |H - H†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("time {t} fs lies outside the pulse window [0, {duration}] fs")]
    OutsidePulseWindow { t: f64, duration: f64 },

    #[error("dephasing probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("a Trotter layer needs at least one fragment")]
    EmptyFragments,

    #[error("state has no probe qubit attached")]
    ProbeMissing,

    /// The probe gap coincides with every available transition, so the lower
    /// bound on the interaction time diverges.
    #[error("probe gap {omega_pr} cm^-1 is degenerate with every adjacent-manifold gap")]
    DegenerateProbeGap { omega_pr: f64 },

    #[error("phase-cycle data incomplete: {missing} of {expected} combinations missing")]
    MissingCombinations { missing: usize, expected: usize },

    #[error("ledger incomplete: {} keys missing", .missing.len())]
    IncompleteLedger { missing: Vec<String> },

    #[error("ledger has no `{0}` channel")]
    MissingObservable(&'static str),

    #[error("requested frequency {requested} cm^-1 lies outside the axis [{min}, {max}]")]
    OutOfAxis { requested: f64, min: f64, max: f64 },

    #[error("eigendecomposition failed to converge")]
    Eigen,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidSpec {
        field,
        reason: reason.into(),
    }
}
