use thiserror::Error;

/// Errors raised by the frame toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("singular element (smallest singular value {smallest_singular_value:e})")]
    Singular { smallest_singular_value: f64 },

    #[error("mode error: {0}")]
    Mode(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T, E = FrameError> = std::result::Result<T, E>;
