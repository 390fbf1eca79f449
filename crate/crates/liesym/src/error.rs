//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("invalid simple type `{0}`")]
    InvalidType(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("vector is not a root: {0:?}")]
    NotARoot(Vec<i64>),
    #[error("predicate set is not closed under negation")]
    NotSymmetric,
    #[error("invalid base: {0}")]
    InvalidBase(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent automorphism: {0}")]
    Inconsistent(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("unknown item: {0}")]
    Unknown(String),
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, LieError>;
