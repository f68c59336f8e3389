use thiserror::Error;

use crate::address::Digit;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit {digit} out of range for base {n_parts}")]
    DigitOutOfRange { digit: Digit, n_parts: u32 },

    #[error("malformed address literal {literal:?}: {reason}")]
    MalformedLiteral { literal: String, reason: String },

    #[error("part count must be at least 2, got {0}")]
    InvalidPartCount(u32),

    #[error("rule {left} = {right} cannot be canonicalized: {reason}")]
    NotCanonicalizable {
        left: String,
        right: String,
        reason: String,
    },

    #[error("rule side {side} is invariant under scaling and would match at every scale")]
    ScaleInvariantSide { side: String },

    #[error("equivalence class exceeded the cap of {cap} members")]
    ClassBudgetExceeded { cap: usize },

    #[error("address {address} lies outside space {space}")]
    AddressOutsideSpace { address: String, space: String },

    #[error("cells differ in scale or word length")]
    ScaleMismatch,

    #[error("adjacency is only defined for two distinct cells")]
    IdenticalCells,

    #[error("cell word must be non-empty")]
    EmptyCellWord,

    #[error("cell {cell} lies outside space {space}: {reason}")]
    CellOutsideSpace {
        cell: String,
        space: String,
        reason: String,
    },

    #[error("level {level} with {n_parts} parts exceeds the size limit of 2^24 cells")]
    SizeLimitExceeded { level: u32, n_parts: u32 },

    #[error("graph level must be at least 1")]
    ZeroLevel,

    #[error("depth must be at least 1")]
    ZeroDepth,

    #[error("unknown builtin space {0:?}")]
    UnknownBuiltin(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
