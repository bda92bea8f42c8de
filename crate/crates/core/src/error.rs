use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Numerical routines never panic on bad input; they return one of these
/// variants so callers (CLI, wasm bindings, tests) can decide how to react.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error(
        "eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
    )]
    ConvergenceError { sweeps: usize, off_norm: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error(
        "invalid bath temperatures: hot {hot} peV must be >= cold {cold} peV and both positive"
    )]
    InvalidTemperatures { hot: f64, cold: f64 },

    #[error("propagation step failed at t = {time} ns: {reason}")]
    StepError { time: f64, reason: String },

    #[error("config parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("config validation error: {0}")]
    ValidationError(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::DomainError(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::ValidationError(msg.into())
    }
}
