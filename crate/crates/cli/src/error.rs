use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad flags, invalid model settings.
    #[error("{0}")]
    Input(String),

    /// The library declined to compute a result for valid input.
    #[error(transparent)]
    Refused(robustlm::Error),

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Refused(_) | CliError::Output(_) => ExitCode::from(1),
        }
    }
}

impl From<robustlm::Error> for CliError {
    fn from(e: robustlm::Error) -> Self {
        use robustlm::Error as E;
        match e {
            E::InvalidSpec(_)
            | E::NonStationary { .. }
            | E::MemoryOutOfRange(_)
            | E::NonFinite(_)
            | E::InvalidConfig(_) => CliError::Input(e.to_string()),
            other => CliError::Refused(other),
        }
    }
}
