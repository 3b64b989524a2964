use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("metric inconsistency: non-scalar part {residual:.3e} exceeds tolerance")]
    MetricInconsistency { residual: f64 },

    #[error("construction failed at n={n}: best residual {residual:.3e}")]
    Construction { n: usize, residual: f64 },

    #[error("spin metric is ambiguous: intertwiner nullities {dims:?}")]
    AmbiguousSpinMetric { dims: Vec<usize> },

    #[error("spin metric has no symmetric part (n={n})")]
    WrongResidue { n: usize },

    #[error("controlling spinor is isotropic: X^A X_A = {value:.3e}")]
    DegenerateSpinor { value: f64 },

    #[error("reflection vector is isotropic: g(r,r) = {value:.3e}")]
    DegenerateReflection { value: f64 },

    #[error("metric has a zero diagonal entry at index {index}")]
    DegenerateMetric { index: usize },

    #[error("no identity element: best residual {residual:.3e} (threshold {threshold:.3e})")]
    NoIdentity {
        residual: f64,
        threshold: f64,
        candidate: Vec<num_complex::Complex64>,
    },

    #[error("numerical routine failed: {0}")]
    Numerical(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
