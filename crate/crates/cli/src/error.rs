use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),

    /// The analysis rejected its input, or could not decide.
    #[error("{0}")]
    Core(#[from] hgda_core::Error),

    /// A numerical result failed its own cross-check.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for configuration and input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use hgda_core::Error as E;
        match self {
            CliError::Numerical(_) => 3,
            CliError::Core(E::Inconclusive(_) | E::NoConvergence(_) | E::InsufficientData(_)) => 3,
            _ => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(hgda_core::Error::Unsupported("singular matrix".into())).exit_code(), 2);
        assert_eq!(CliError::Core(hgda_core::Error::Inconclusive("jury".into())).exit_code(), 3);
        assert_eq!(CliError::Numerical("mismatch".into()).exit_code(), 3);
    }
}
