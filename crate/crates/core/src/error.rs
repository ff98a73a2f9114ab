use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: n = {n} exceeds the configured limit {limit}")]
    LimitExceeded { what: &'static str, n: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("no root certified in bracket [{lo}, {hi}]: {reason}")]
    BracketError { lo: f64, hi: f64, reason: String },

    #[error("partition is not equitable: block ({row_block}, {col_block}) has non-constant row sums")]
    NotEquitable { row_block: usize, col_block: usize },

    #[error("spectrum reconstruction disagrees with the direct spectrum (max deviation {deviation:e})")]
    MultisetMismatch { deviation: f64 },

    #[error("invalid family specification: {0}")]
    SpecInvalid(String),

    #[error("cycle enumeration exceeded the work cap of {cap} extension steps")]
    WorkCapExceeded { cap: u64 },

    #[error("graph is disconnected; split it into components first")]
    Disconnected,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
