use std::fmt::Display;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or configuration.
    #[error("{0}")]
    Validation(String),
    /// Valid input, but the computation has no answer or missed its tolerance.
    #[error("{0}")]
    Infeasible(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(e: impl Display) -> Self {
        CliError::Validation(e.to_string())
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } => ExitCode::from(1),
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Infeasible(_) => ExitCode::from(3),
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::validation(e)
            }
        }
    )*};
}

validation_from!(
    qmem_core::bounds::BoundError,
    qmem_core::classical::ClassicalError,
    qmem_core::gf2::Gf2Error,
    qmem_core::model::ModelError,
    qmem_core::sim::SimError,
    serde_json::Error,
    csv::Error
);

impl From<qmem_core::codes::CodeError> for CliError {
    fn from(e: qmem_core::codes::CodeError) -> Self {
        match e {
            qmem_core::codes::CodeError::Certification(_) => CliError::Infeasible(e.to_string()),
            other => CliError::validation(other),
        }
    }
}

impl From<qmem_core::decoder_time::OptimizerError> for CliError {
    fn from(e: qmem_core::decoder_time::OptimizerError) -> Self {
        match e {
            qmem_core::decoder_time::OptimizerError::Infeasible(_) => CliError::Infeasible(e.to_string()),
            other => CliError::validation(other),
        }
    }
}
