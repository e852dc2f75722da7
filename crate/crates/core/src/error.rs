//! Error taxonomy shared by every module.
//!
//! Three failure classes propagate out of the library:
//! * [`Error::Schema`] — an input document does not match its declared schema;
//!   carries a JSON-pointer-style path to the offending field.
//! * [`Error::Precondition`] — structurally valid input violates a named
//!   operation precondition (e.g. a cocycle condition fails).
//! * [`Error::Internal`] — an internal assertion failed; always a bug.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input document violates a schema. `path` is a JSON-pointer-like
    /// location ("/morphisms/3/src"), `detail` says what went wrong there.
    #[error("schema violation at {path}: {detail}")]
    Schema { path: String, detail: String },

    /// A named precondition of an operation does not hold for the input.
    #[error("precondition `{name}` failed: {detail}")]
    Precondition { name: String, detail: String },

    /// Internal assertion failure (never the caller's fault).
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn schema(path: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), detail: detail.into() }
    }

    pub fn precondition(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition { name: name.into(), detail: detail.into() }
    }

    pub fn internal(detail: impl Into<String>) -> Self {
        Error::Internal(detail.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
