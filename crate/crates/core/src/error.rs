use thiserror::Error;

/// Errors raised by the geometry kernel, the constructions and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The exact offset engine cannot handle this configuration; use the grid oracle.
    #[error("exact computation not available, grid fallback required: {0}")]
    FallbackRequired(String),

    #[error("dilation is not connected ({components} components)")]
    NotConnected { components: usize },

    #[error("insufficient scales: need at least 3 dyadic levels, got {0}")]
    InsufficientScales(usize),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("perturbation size {delta} is not below the admissible bound {delta_max}")]
    DeltaTooLarge { delta: f64, delta_max: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid resolution too coarse: {0}")]
    ResolutionTooCoarse(String),

    #[error("superlevel set is empty")]
    EmptyRegion,

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
