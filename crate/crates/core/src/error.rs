use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coefficient θ({x}) = {value} is not strictly positive")]
    NonPositiveCoefficient { x: f64, value: f64 },

    #[error("singular system: zero pivot at row {row}")]
    Singular { row: usize },

    #[error("numerical rank {found} differs from expected rank {expected}")]
    Rank { expected: usize, found: usize },

    #[error("eigenvalue iteration stalled at subdiagonal index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// True for failures of the numerics (singular or rank-deficient systems,
    /// stalled iterations) as opposed to bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::Rank { .. } | Error::NoConvergence { .. }
        )
    }
}
