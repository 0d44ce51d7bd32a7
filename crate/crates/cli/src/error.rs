use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Model {
        context: String,
        source: qtd_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Malformed {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error(
        "{}: column 1 is `{found}` (unit `{}`), but `{command}` expects `{expected}` (unit `{}`)",
        path.display(),
        unit_suffix(found),
        unit_suffix(expected)
    )]
    UnitMismatch {
        path: PathBuf,
        command: &'static str,
        found: String,
        expected: &'static str,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Io { .. } => ExitCode::from(4),
            _ => ExitCode::from(2),
        }
    }

    pub fn model(context: impl Into<String>) -> impl FnOnce(qtd_core::Error) -> Self {
        let context = context.into();
        move |source| Self::Model { context, source }
    }
}

impl From<qtd_core::Error> for CliError {
    fn from(source: qtd_core::Error) -> Self {
        Self::Model {
            context: "invalid input".into(),
            source,
        }
    }
}

impl From<qtd_core::fit::FitError> for CliError {
    fn from(e: qtd_core::fit::FitError) -> Self {
        qtd_core::Error::from(e).into()
    }
}

/// Text after the last `_` of a column name: `frequency_hz` -> `hz`.
pub fn unit_suffix(header: &str) -> &str {
    header.rsplit_once('_').map_or(header, |(_, u)| u)
}

/// Exit status for a fit that stopped without converging; the report is
/// still written.
pub const NOT_CONVERGED: u8 = 3;
