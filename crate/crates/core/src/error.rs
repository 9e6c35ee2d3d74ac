use std::path::PathBuf;

use crate::model::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field `{field}` out of range: {value} not in 0..={max}")]
    FieldOutOfRange { field: Field, value: i64, max: u8 },

    #[error("state index {index} out of range for a space of {len} states")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("invalid `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("observation O={observation} has zero likelihood under the current belief")]
    InconsistentObservation { observation: u8 },

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("corrupt policy file: {0}")]
    CorruptPolicy(String),

    #[error("policy provenance mismatch: {0}")]
    ProvenanceMismatch(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("run aborted at epoch {epoch}: {source}")]
    Aborted {
        epoch: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input (config, scenario, policy file) as opposed to
    /// failures during a run.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Aborted { .. } | Error::InconsistentObservation { .. }
        )
    }
}
