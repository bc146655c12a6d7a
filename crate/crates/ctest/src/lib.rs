//! Verification harness, JSON reports, text input formats and the command-line
//! front end for `ctest-core`.

pub mod dump;
pub mod harness;
pub mod input;
pub mod report;
pub mod sampling;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ctest_core::Error),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("bad expression `{text}`: {reason}")]
    Spec { text: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
