use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("unstable drift: eigenvalue with real part {max_real_part:e} is not in the open left half-plane")]
    UnstableDrift { max_real_part: f64 },

    #[error("basis of dimension {dim} exceeds the configured maximum {max}")]
    BasisOverflow { dim: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "ill-conditioned spectrum: eigenvector condition number {condition:e} exceeds {bound:e}"
    )]
    IllConditionedSpectrum { condition: f64, bound: f64 },

    #[error("singular gramian at t = {t:e}: det Q_t = {det:e} (quadrature needs t above roughly {threshold:e})")]
    SingularGramian { t: f64, det: f64, threshold: f64 },

    #[error("degenerate observation: smallest singular value {sigma_min:e} below {floor:e}")]
    DegenerateObservation { sigma_min: f64, floor: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(arg: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        arg,
        reason: reason.into(),
    }
}
