use thiserror::Error;

/// Contract violations and configuration failures.
///
/// Exact-arithmetic verdicts never produce errors of their own: once inputs
/// pass the preconditions below, every decision path is total.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("contract violation: empty point set")]
    EmptyPointSet,

    #[error("cost vector must be nonzero")]
    ZeroCostVector,

    #[error("distribution not symmetric: {0}")]
    SymmetryViolation(String),

    #[error("atom weights invalid: {0}")]
    WeightError(String),

    #[error("experiment requires an exactly mean-zero entry law")]
    MeanZeroRequired,

    #[error("experiment requires a finite-atom entry law")]
    FiniteAtomsRequired,

    #[error("state space of {states} assignments exceeds the enumeration guard of {guard}")]
    TooLargeToEnumerate { states: u128, guard: u64 },

    #[error("invalid config: {0}")]
    ConfigError(String),

    #[error("cannot parse rational from {input:?}: {reason}")]
    InvalidRational { input: String, reason: String },
}
