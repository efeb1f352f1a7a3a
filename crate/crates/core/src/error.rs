use thiserror::Error;

/// Errors raised by the integral, matrix and solver layers.
#[derive(Debug, Error)]
pub enum FockError {
    /// An integral index tuple outside the set reachable from the basis.
    #[error("index-set violation: {0}")]
    IndexSet(String),

    /// An argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or adaptive procedure ran out of budget.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// Cholesky factorisation of the overlap matrix broke down.
    #[error("overlap matrix is not positive definite (pivot {pivot} at column {column})")]
    LinearDependence { column: usize, pivot: String },

    /// A coalescence point that lies on a boundary of the Hylleraas domain.
    #[error("boundary point: {0}")]
    Boundary(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, FockError>;
