use std::fmt;

use homoclinic::Error;

/// Error with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad configuration, flags or output location: exit 2.
    Config(anyhow::Error),
    /// Parameters outside Region 1: exit 3.
    Domain(anyhow::Error),
    /// Recurrence or root finding failed: exit 4.
    Solver(anyhow::Error),
    /// The shooting oracle failed: exit 5.
    Oracle(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Solver(_) => 4,
            Failure::Oracle(_) => 5,
        }
    }

    /// Library errors raised while shooting count as oracle failures.
    pub fn oracle(err: Error) -> Self {
        match err {
            Error::NotRegion1 { .. } | Error::InvalidInput(_) => Failure::from(err),
            other => Failure::Oracle(other.into()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidInput(_) => Failure::Config(err.into()),
            Error::NotRegion1 { .. } => Failure::Domain(err.into()),
            Error::NoConnection(_) | Error::ShootingNotConverged { .. } | Error::Integration(_) => {
                Failure::Oracle(err.into())
            }
            Error::Resonance { .. } | Error::Overflow { .. } | Error::RootsNotConverged { .. } => {
                Failure::Solver(err.into())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Config(anyhow::Error::new(err).context("writing output"))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, err) = match self {
            Failure::Config(e) => ("config error", e),
            Failure::Domain(e) => ("domain error", e),
            Failure::Solver(e) => ("solver error", e),
            Failure::Oracle(e) => ("oracle error", e),
        };
        write!(f, "{kind}: {err:#}")
    }
}
