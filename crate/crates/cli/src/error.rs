use thiserror::Error;

/// Failures that carry a specific process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Stability(String),
    #[error("{0}")]
    Tolerance(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
            CliError::Stability(_) => 4,
            CliError::Tolerance(_) => 5,
        }
    }
}

fn library_code(err: &antiratio::Error) -> u8 {
    use antiratio::Error::*;
    match err {
        Stability { .. } => 4,
        NonConvergence { .. } | GridTooCoarse { .. } | BoundaryLeakage { .. } => 5,
        Domain { .. }
        | LengthMismatch { .. }
        | InvalidGrid(_)
        | TailLeakage { .. }
        | PacketClipped(_)
        | AsymmetricGrid
        | TooFewStates(_)
        | IncompatibleTrajectory(_) => 2,
    }
}

/// Exit status for an error chain: the first recognised cause wins, anything else is 1.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return e.code();
        }
        if let Some(e) = cause.downcast_ref::<antiratio::Error>() {
            return library_code(e);
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_follow_the_chain() {
        let e = anyhow::Error::new(antiratio::Error::Stability { dt: 1.0, bound: 0.5 }).context("evolve");
        assert_eq!(exit_code(&e), 4);
        let e = anyhow::Error::new(CliError::Tolerance("drift".into()));
        assert_eq!(exit_code(&e), 5);
        let io = std::io::Error::new(std::io::ErrorKind::PermissionDenied, "denied");
        assert_eq!(exit_code(&anyhow::Error::new(io).context("write")), 3);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), 1);
    }
}
