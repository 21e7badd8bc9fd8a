use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI run. Every variant names the offending field or file.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {message}")]
    Input { field: String, message: String },
    #[error("{field}: {source}")]
    Core {
        field: String,
        #[source]
        source: cone_quantile_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("selftest: {failed} of {total} checks failed")]
    SelfTest { failed: usize, total: usize },
}

impl CliError {
    pub fn input(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 1 for a failed selftest, 3 for numerical failures, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } if source.is_numerical() => 3,
            CliError::SelfTest { .. } => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a field name to core errors.
pub trait Field<T> {
    fn field(self, name: &str) -> CliResult<T>;
}

impl<T> Field<T> for cone_quantile_core::Result<T> {
    fn field(self, name: &str) -> CliResult<T> {
        self.map_err(|source| CliError::Core {
            field: name.to_string(),
            source,
        })
    }
}
