use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point is not on the unit sphere (|p| = {norm})")]
    NotOnSphere { norm: f64 },

    #[error("vector is not tangent at the base point (<v, p> = {inner})")]
    NotTangent { inner: f64 },

    #[error("vector is not horizontal (theta(v) = {theta})")]
    NotHorizontal { theta: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tangent vectors live at different base points")]
    BasePointMismatch,

    #[error("point lies on the excluded circle x2 = y2 = 0")]
    ExcludedCircle,

    #[error("could not build a horizontal frame at the given point")]
    FrameConstruction,

    #[error("invalid step size {0}")]
    InvalidStep(f64),

    #[error("trajectory left the chart domain at t = {t}")]
    ChartExit { t: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
