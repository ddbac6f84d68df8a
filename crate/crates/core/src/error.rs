use alloc::string::String;

/// Errors raised by state validation, entropy evaluation, estimators and simulators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not Hermitian: max |M - M^dag| = {0:e}")]
    NotHermitian(f64),

    #[error("not positive semidefinite: min eigenvalue {0:e}")]
    NotPsd(f64),

    #[error("trace is not 1: |Tr M - 1| = {0:e}")]
    NotUnitTrace(f64),

    #[error("vector is not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),

    #[error("negative eigenvalue {0:e} in matrix power")]
    NegativeEigenvalue(f64),

    #[error("unknown register label `{0}`")]
    UnknownLabel(String),

    #[error("invalid subsystem dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid bipartite split: {0}")]
    InvalidSplit(String),

    #[error("invalid rank {rank} for total dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("channel is not trace preserving: max |sum K^dag K - I| = {0:e}")]
    NotTracePreserving(f64),

    #[error("alpha = {alpha} outside the admissible range {range}")]
    AlphaOutOfRange { alpha: f64, range: &'static str },

    #[error("missing register `{0}`")]
    MissingRegister(String),

    #[error("fidelity precondition failed: F(psi, rho) = {actual} < {required}")]
    FidelityPreconditionFailed { required: f64, actual: f64 },

    #[error("optimizer diverged: {0}")]
    OptimizerDiverged(String),

    #[error("every restart produced +inf; the input state has no separable state with compatible support")]
    SupportIncompatible,

    #[error("rate {rate} outside [0, {max}]")]
    RateOutOfRange { rate: f64, max: f64 },

    #[error("problem too large for dense evaluation: {0}")]
    TooLarge(String),

    #[error("bound violation: {0}")]
    BoundViolation(String),

    #[error("invalid preset `{0}`")]
    InvalidPreset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
