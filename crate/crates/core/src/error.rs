use num_complex::Complex64;
use thiserror::Error;

use crate::spectrum::Region;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The characteristic quartic vanished at `k * alpha`.
    #[error("resonance at order {k}: |p(k alpha)| = {modulus:e}")]
    Resonance { k: usize, modulus: f64 },

    /// The operation needs a saddle-focus (Region 1) origin.
    #[error("(b, a) lies in {region}, not in Region 1")]
    NotRegion1 { region: Region },

    /// A non-finite value appeared while evaluating a series or polynomial.
    #[error("overflow at order {k}")]
    Overflow { k: usize },

    #[error("root finder did not converge after {iterations} iterations (largest correction {max_step:e})")]
    RootsNotConverged {
        iterations: usize,
        max_step: f64,
        best: Vec<Complex64>,
    },

    #[error("integration failed: {0}")]
    Integration(String),

    /// The shooting oracle has nothing to look for.
    #[error("no homoclinic connection: {0}")]
    NoConnection(String),

    #[error("shooting did not converge: best boundary mismatch {mismatch:e}")]
    ShootingNotConverged { mismatch: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
