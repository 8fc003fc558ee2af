use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("acceptance check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

impl From<cpde_core::Error> for CliError {
    fn from(e: cpde_core::Error) -> Self {
        use cpde_core::Error as E;
        match e {
            E::InvalidArgument(_) | E::NonPositiveCoefficient { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        use cpde_core::Error as E;
        assert_eq!(CliError::from(E::Singular { row: 3 }).exit_code(), 3);
        assert_eq!(CliError::from(E::Rank { expected: 11, found: 10 }).exit_code(), 3);
        assert_eq!(CliError::from(E::NoConvergence { index: 1, iterations: 9 }).exit_code(), 3);
        assert_eq!(CliError::from(E::InvalidArgument("x".into())).exit_code(), 2);
        assert_eq!(CliError::Check("x".into()).exit_code(), 4);
    }
}
