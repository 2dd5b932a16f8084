//! Crate-wide error type.
//!
//! Variants are grouped by how callers are expected to react:
//! `Parse` means the input text is malformed, `Precondition` means a
//! well-formed input is outside an operation's domain, `Resource` means a
//! computation hit a configured cap and carries whatever partial state is
//! useful for diagnosis, and `Inconsistency` means an internal invariant
//! that should hold for every valid input was observed to fail.

use thiserror::Error;

/// Which resource cap was exhausted during a Groebner basis run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapKind {
    /// Number of S-pairs processed.
    Pairs,
    /// Support size (term count) of an intermediate operator.
    Support,
    /// Wall-clock deadline.
    Deadline,
    /// Degree cap of a cohomology solve.
    Degree,
}

impl std::fmt::Display for CapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CapKind::Pairs => write!(f, "pair count"),
            CapKind::Support => write!(f, "support size"),
            CapKind::Deadline => write!(f, "deadline"),
            CapKind::Degree => write!(f, "degree cap"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("nonconstant factor without rational roots remains: {0}")]
    IrrationalResidual(String),

    #[error("resource cap exceeded ({kind}): {detail}")]
    Resource {
        kind: CapKind,
        detail: String,
        /// Printable partial state (e.g. basis computed so far), for diagnosis.
        partial: Vec<String>,
    },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Precondition(_) => 3,
            Error::InexactDivision(_) | Error::IrrationalResidual(_) => 3,
            Error::Resource { .. } => 4,
            Error::Inconsistency(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
