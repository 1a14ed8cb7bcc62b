use std::path::{Path, PathBuf};

use thiserror::Error;

/// Everything that can stop a command, each mapped to a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid or unreadable configuration. `path` locates the field.
    #[error("{}config error{}: {message}", file_prefix(.file), field_suffix(.path))]
    Config { file: Option<PathBuf>, path: String, message: String },

    /// Malformed input table; `line` is 1-based and counts the header.
    #[error("{}: line {line}: {message}", .file.display())]
    Csv { file: PathBuf, line: u64, message: String },

    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Model(#[from] hcm_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

fn file_prefix(file: &Option<PathBuf>) -> String {
    file.as_ref().map(|f| format!("{}: ", f.display())).unwrap_or_default()
}

fn field_suffix(path: &str) -> String {
    if path.is_empty() {
        String::new()
    } else {
        format!(" at `{path}`")
    }
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    /// Attaches the file a configuration error came from.
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            Self::Config { path: field, message, .. } => {
                Self::Config { file: Some(path.to_path_buf()), path: field, message }
            }
            other => other,
        }
    }

    /// 2 configuration or input data, 3 numerical failure, 4 infeasible
    /// design budget, 5 integrator instability.
    pub fn exit_code(&self) -> u8 {
        use hcm_core::Error as E;
        match self {
            Self::Config { .. } | Self::Csv { .. } | Self::Io { .. } => 2,
            Self::Model(e) => match e {
                E::Validation { .. } | E::ServoTooWeak { .. } => 2,
                E::Domain { .. } | E::Quadrature { .. } | E::RootNotFound { .. } => 3,
                E::Infeasible { .. } => 4,
                E::Instability { .. } => 5,
            },
        }
    }
}
