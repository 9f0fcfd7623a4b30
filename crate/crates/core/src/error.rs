use thiserror::Error;

/// Errors raised by the library.
///
/// Resource-limit failures are kept distinct from mathematical failures so that
/// callers can tell "claim unverified" apart from "claim false".
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} variables, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("lcm of an empty set of monomials")]
    EmptyLcm,

    #[error("exponent {0} exceeds the supported maximum 2^31-1")]
    ExponentOverflow(u64),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("ideal is not Artinian")]
    NotArtinian,

    #[error("operation requires a proper nonzero ideal")]
    ZeroOrUnitIdeal,

    #[error("resource limit exceeded: {what} (limit {limit})")]
    LimitExceeded { what: String, limit: usize },

    #[error(
        "exponent {exponent} of variable {variable} exceeds lifting-matrix row length {row_len}"
    )]
    ExponentExceedsRow {
        variable: usize,
        exponent: u32,
        row_len: usize,
    },

    #[error("Vandermonde scalars must be pairwise distinct (b_{0} = b_{1})")]
    RepeatedScalar(usize, usize),

    #[error("invalid lifting matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid O-sequence: {0}")]
    InvalidSequence(String),

    #[error("configuration violates downward closure at component {0:?}")]
    ConditionViolated(Vec<u32>),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by configured resource limits rather than by
    /// the mathematics or the input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }

    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }

    /// Turn a column that counts bytes from the start of `text` into a
    /// line and column within `text`.
    pub(crate) fn locate_in(self, text: &str) -> Self {
        match self {
            Error::Parse {
                line: 1,
                column,
                message,
            } => {
                let before = &text[..column.saturating_sub(1).min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.rfind('\n').map_or(column, |nl| column - nl - 1);
                Error::Parse {
                    line,
                    column,
                    message,
                }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
