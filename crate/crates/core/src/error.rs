use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("sample count {samples} does not match grid count {grid}")]
    LengthMismatch { samples: usize, grid: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("quadrature did not converge after {refinements} refinements (last change {last_change:e})")]
    NonConvergence { refinements: usize, last_change: f64 },
    #[error("spectral tail amplitude {tail:e} exceeds truncation threshold {threshold:e} of peak")]
    TailLeakage { tail: f64, threshold: f64 },
    #[error("packet is clipped by the grid: {0}")]
    PacketClipped(&'static str),
    #[error("time step {dt:e} exceeds stability bound {bound:e}")]
    Stability { dt: f64, bound: f64 },
    #[error("boundary density {density:e} of peak exceeds {limit:e}")]
    BoundaryLeakage { density: f64, limit: f64 },
    #[error("grid is not symmetric about the origin")]
    AsymmetricGrid,
    #[error("laplacian truncation estimate {estimate:e} exceeds tolerance {tol:e}")]
    GridTooCoarse { estimate: f64, tol: f64 },
    #[error("trajectory needs at least 3 equally spaced states, got {0}")]
    TooFewStates(usize),
    #[error("trajectory states are not compatible: {0}")]
    IncompatibleTrajectory(&'static str),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
