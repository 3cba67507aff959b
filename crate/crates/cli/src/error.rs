use std::io;

use crate::config::Invalid;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Solver(#[from] softguide::Error),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl From<Invalid> for CliError {
    fn from(e: Invalid) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl CliError {
    /// 2 invalid input, 3 solver failure, 4 inconclusive or failed bracket, 5 i/o.
    pub fn exit_code(&self) -> u8 {
        use softguide::Error as E;
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(e) => match e {
                E::Domain(_)
                | E::Resolution { .. }
                | E::Kind(_)
                | E::EmptyDomain(_)
                | E::Dimension(_) => 2,
                E::NonConvergence { .. } | E::NotPositiveDefinite { .. } => 3,
                E::Bracket(_) | E::Inconclusive(_) => 4,
            },
            CliError::Io(_) => 5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert_eq!(CliError::Validation("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::from(softguide::Error::Inconclusive("x".into())).exit_code(),
            4
        );
        let e = softguide::Error::NonConvergence {
            iterations: 1,
            worst_residual: 1.0,
        };
        assert_eq!(CliError::from(e).exit_code(), 3);
        assert_eq!(CliError::from(io::Error::other("x")).exit_code(), 5);
    }
}
