use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The grid is too coarse for the well depth (`depth * h^2` too large).
    #[error("resolution error: depth*h^2 = {value:.3e} exceeds {limit}")]
    Resolution { value: f64, limit: f64 },

    /// Pointwise evaluation requested for a profile kind that has none.
    #[error("profile kind error: {0}")]
    Kind(String),

    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("no convergence after {iterations} iterations (worst residual {worst_residual:.3e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
    },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("bracket error: {0}")]
    Bracket(String),

    /// An eigenvalue sits too close to the counting level, or Dirichlet and
    /// Neumann runs disagree where they must not.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
