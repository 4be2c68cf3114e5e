use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),

    #[error("invariant violated: {invariant} ({detail})")]
    Invariant { invariant: &'static str, detail: String },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("state {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("chain is not ergodic: {0}")]
    NotErgodic(String),

    #[error("mixing time inconclusive: envelope {envelope:.3e} exceeds eps {eps:.3e} at horizon {horizon}")]
    Inconclusive { horizon: usize, envelope: f64, eps: f64 },

    #[error("eigensolver residual {residual:.3e} exceeds {tolerance:.1e}")]
    EigenResidual { residual: f64, tolerance: f64 },

    #[error("eigenvalue clusters not separable at tol {tol:.3e}: gap {gap:.3e} between {left} and {right}")]
    InseparableClusters { tol: f64, gap: f64, left: f64, right: f64 },

    #[error("amplification unavailable: alpha = {alpha} is numerically 1")]
    AmplificationUnavailable { alpha: f64 },

    #[error("eigenvalue classes disagree with signed-permutation orbits: {0}")]
    OrbitMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant { invariant, detail: detail.into() }
    }
}
