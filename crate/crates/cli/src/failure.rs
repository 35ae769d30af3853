//! Failure channel of the CLI with its exit-code mapping.
//!
//! Verdict-style negatives (a family that is not a J-frame, a candidate that
//! is not a dual) are report data and exit 0; a `Failure` means the command
//! could not produce a report at all.

use std::fmt;

use crate::document::DocumentError;

/// Why a command aborted, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input: exit code 2.
    Parse(String),
    /// A library precondition or the runtime environment rejected the
    /// request: exit code 3.
    Precondition(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Parse(msg) => write!(f, "{msg}"),
            Failure::Precondition(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<DocumentError> for Failure {
    fn from(err: DocumentError) -> Self {
        Failure::Parse(err.to_string())
    }
}

/// Library errors surface after the documents already validated, so they
/// report violated preconditions, not malformed input.
impl From<kframe_core::Error> for Failure {
    fn from(err: kframe_core::Error) -> Self {
        Failure::Precondition(err.to_string())
    }
}
