use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("occupation number {n} is outside a space of dimension {dim}")]
    OutOfRange { n: usize, dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("a Fock state needs at least one level")]
    EmptyState,

    #[error("cannot normalize the zero vector (state annihilated by the construction)")]
    ZeroVector,

    #[error("state is not normalized: |norm^2 - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("dimension {dim} leaves tail mass {tail:e} above tolerance {tol:e}")]
    InsufficientDimension { dim: usize, tail: f64, tol: f64 },

    #[error("truncation loss {loss:e} exceeds tolerance {tol:e}")]
    TruncationLoss { loss: f64, tol: f64 },

    #[error("no dimension up to {max_dim} reaches tail tolerance {tol:e} (achieved {tail:e})")]
    DimensionCap { max_dim: usize, tail: f64, tol: f64 },

    #[error("series did not converge within {terms} terms")]
    NotConverged { terms: usize },

    #[error("A A^dagger has a zero eigenvalue at occupation {n} inside the sector")]
    ZeroEigenvalue { n: usize },

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid point m={m}, alpha={alpha}: {source}")]
    GridPoint {
        m: u32,
        alpha: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
