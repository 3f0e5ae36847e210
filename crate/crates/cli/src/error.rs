use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown key `{path}`{}", suggestion.as_ref().map(|s| format!(", did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey { path: String, suggestion: Option<String> },
    #[error("invalid `{path}`: {reason}")]
    Validation { path: String, reason: String },
    #[error("simulation invariant violated: {0}")]
    Invariant(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse(_) | CliError::UnknownKey { .. } => 2,
            CliError::Validation { .. } => 3,
            CliError::Invariant(_) => 4,
            CliError::Output(_) => 1,
        }
    }

    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Validation {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<powlab_core::report::ReportError> for CliError {
    fn from(e: powlab_core::report::ReportError) -> Self {
        CliError::Output(e.to_string())
    }
}
