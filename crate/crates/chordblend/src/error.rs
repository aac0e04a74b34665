use std::path::PathBuf;

use chordblend_core::Error as CoreError;
use thiserror::Error;

/// Errors raised while reading documents, resolving idioms or running a
/// blend. Each variant maps to a stable machine code.
#[derive(Debug, Error)]
pub enum AppError {
    /// A document does not match its schema. `path` is a JSON pointer, or a
    /// `row/col` location for CSV input.
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("unknown idiom {0:?}")]
    UnknownIdiom(String),
    #[error("an idiom named {0:?} already exists")]
    Conflict(String),
    #[error("unknown chord {0} for this matrix")]
    UnknownChord(String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl AppError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        AppError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            AppError::Schema { .. } => "schema_error",
            AppError::Core(e) => core_code(e),
            AppError::UnknownIdiom(_) => "unknown_idiom",
            AppError::Conflict(_) => "conflict",
            AppError::UnknownChord(_) => "unknown_chord",
            AppError::Usage(_) => "usage",
            AppError::Read { .. } => "read_error",
            AppError::Write { .. } => "write_error",
            AppError::Internal(_) => "internal",
        }
    }

    /// Process exit status for the command line: 2 usage, 3 data, 4 internal.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) | AppError::Core(CoreError::NoArguments) => 2,
            AppError::Write { .. } | AppError::Internal(_) => 4,
            _ => 3,
        }
    }
}

fn core_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::Chord(_) | CoreError::Parse { .. } => "parse_error",
        CoreError::EmptyCorpus => "empty_corpus",
        CoreError::NoArguments => "no_arguments",
        CoreError::NoTransitions(_) => "no_transitions",
        CoreError::InvalidCapacity => "invalid_capacity",
        CoreError::InvalidBridgeMass(_) => "invalid_bridge_mass",
        CoreError::EmptyPool => "empty_pool",
        CoreError::DeadStart(_) => "dead_start",
        CoreError::InvalidLength(_) => "invalid_length",
        CoreError::UnknownIndex { .. } => "unknown_index",
        _ => "invalid_matrix",
    }
}
