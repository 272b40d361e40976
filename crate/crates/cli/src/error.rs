use std::path::PathBuf;

use blockcoh::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: malformed JSON: {message}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: schema violation at {pointer}: {message}", path.display())]
    Schema {
        path: PathBuf,
        pointer: String,
        message: String,
    },
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{failed} demo check(s) failed")]
    DemoFailed { failed: usize },
}

impl CliError {
    /// 2 for invalid input, 3 for an infeasible conversion, 4 when a
    /// verification step fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Infeasible { .. } | Error::ZeroWeightPolicy { .. } | Error::SingularSystem) => 3,
            CliError::Core(
                Error::VerificationFailed { .. } | Error::NotAConversion { .. } | Error::CertificateViolation { .. },
            )
            | CliError::DemoFailed { .. } => 4,
            _ => 2,
        }
    }
}
