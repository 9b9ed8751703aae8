use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Bad expression inside a JSON document; `position` is the byte offset
    /// within the string at `path`.
    #[error("{path}, offset {position}: {message}")]
    Expression {
        path: String,
        position: usize,
        message: String,
    },
    #[error("unsupported field: k = {0}, expected 1..=8")]
    UnsupportedField(u32),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] qf2_core::Error),
}

impl CliError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn expression(path: &str, e: qf2_core::Error) -> Self {
        match e {
            qf2_core::Error::Parse { position, message } => CliError::Expression {
                path: path.into(),
                position,
                message,
            },
            other => CliError::Expression {
                path: path.into(),
                position: 0,
                message: other.to_string(),
            },
        }
    }

    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } | CliError::Expression { .. } => "ParseError",
            CliError::UnsupportedField(_) => "UnsupportedField",
            CliError::Invalid(_) => "InvalidJob",
            CliError::Io(_) => "IoError",
            CliError::Core(e) => e.code(),
        }
    }
}
