use thiserror::Error;

use crate::spaces::SpaceKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: SpaceKind, right: SpaceKind },

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("empty input")]
    EmptyInput,

    #[error("weights must be finite and sum to 1 (sum = {sum})")]
    BadWeights { sum: f64 },

    #[error("index ({s}, {t}) out of range for a grid of {len} points")]
    IndexError { s: usize, t: usize, len: usize },

    #[error("need at least 2 trajectories or objects, got {0}")]
    TooFewTrajectories(usize),

    #[error("zero metric variance in one margin")]
    DegenerateVariance,

    #[error("requested {k} components from a surface on {grid} grid points")]
    BadRank { k: usize, grid: usize },

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("spectrum has no positive mass")]
    DegenerateSpectrum,

    #[error("eigenfunction {component} integrates to {integral:e}; its Fréchet integral is undefined")]
    NonIntegrableEigenfunction { component: usize, integral: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for errors caused by malformed or insufficient input rather than
    /// by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::DegenerateSpectrum
                | Error::DegenerateVariance
                | Error::NonIntegrableEigenfunction { .. }
                | Error::InvalidSurface(_)
        )
    }
}
