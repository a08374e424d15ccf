use thiserror::Error;

use tetradigit_core::circuit::CircuitError;
use tetradigit_core::css::CssError;
use tetradigit_core::model::ModelError;

use crate::format::FormatError;

/// Failures that stop a command before it can produce a report. Each maps to
/// a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("malformed CSS input: {0}")]
    Css(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Css(_) => 4,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NotAStabilizerCode(_) | ModelError::Unsupported(_) => CliError::Unsupported(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::UnsupportedModel(_) => CliError::Unsupported(e.to_string()),
            CircuitError::Model(m) => m.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<CssError> for CliError {
    fn from(e: CssError) -> Self {
        CliError::Css(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Config(e.to_string())
    }
}

pub fn config(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(msg.to_string())
}
