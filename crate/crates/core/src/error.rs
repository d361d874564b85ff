//! Error and result types shared by every module in the crate.

/// Errors produced by parsing, validation, and localization operations.
///
/// The two variants callers most often branch on are [`Error::FormulaUnavailable`]
/// (a formula that is registered but intentionally has no definition) and
/// everything else (malformed or semantically invalid input).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A text document could not be parsed. `line` is 1-based within the input.
    #[error("parse error at line {line}: {message}")]
    Parse {
        /// 1-based line number inside the offending document.
        line: usize,
        /// Human-readable description of what was expected.
        message: String,
    },

    /// Structurally well-formed input that violates a semantic rule.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A statement was referenced but does not belong to the relevant set.
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),

    /// The requested formula is registered but has no usable definition.
    #[error("formula `{0}` is registered but its definition is unavailable")]
    FormulaUnavailable(String),

    /// The slicing criterion was not covered by the failing execution.
    #[error("slicing criterion `{0}` was not executed by the failing run")]
    CriterionNotExecuted(String),

    /// An effectiveness score was requested but no faulty statement is ranked.
    #[error("no faulty statement lies in the ranked universe")]
    NoFaultInUniverse,

    /// File-system access failed.
    #[error("cannot access `{path}`: {source}")]
    Io {
        /// Path that could not be read or written.
        path: String,
        /// Underlying I/O failure.
        #[source]
        source: std::io::Error,
    },

    /// A JSON document could not be decoded.
    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
