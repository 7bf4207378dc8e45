use thiserror::Error;

/// Failures of grid construction, factorization and the eigensolver.
#[derive(Debug, Error)]
pub enum FdError {
    #[error("grid spacing h = {h} exceeds a0/8 = {limit}")]
    SpacingTooCoarse { h: f64, limit: f64 },

    #[error("truncation radius {radius} covers fewer than four coils (needs at least {needed})")]
    RadiusTooSmall { radius: f64, needed: f64 },

    #[error("coil unresolved: only {nodes} interior nodes across a coil near ({x:.4}, {y:.4})")]
    CoilUnresolved { nodes: usize, x: f64, y: f64 },

    #[error("grid has no interior nodes")]
    EmptyGrid,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero pivot at row {row} while factoring with shift {shift}")]
    ZeroPivot { row: usize, shift: f64 },

    #[error("eigensolver did not converge after {restarts} restarts; best residual estimates {residuals:?}")]
    NoConvergence { restarts: usize, residuals: Vec<f64> },

    #[error("spectral window not exhausted: all {computed} computed eigenvalues lie below {threshold} (largest {largest})")]
    WindowNotExhausted { computed: usize, threshold: f64, largest: f64 },

    #[error("inertia reports {expected} eigenvalues below {threshold} but the solver found {found}")]
    MissedEigenvalues { expected: usize, found: usize, threshold: f64 },

    #[error(transparent)]
    Geometry(#[from] spiral_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = FdError> = std::result::Result<T, E>;
