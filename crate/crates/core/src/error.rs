use thiserror::Error;

use crate::pairing::Code;

/// Errors shared by every evaluator and search in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    /// A bounded search ran out of its query budget before deciding.
    #[error("fuel exhausted while {context}")]
    FuelExhausted { context: &'static str },

    /// A promise (composite invariant, genuine-copy promise, lawful
    /// isomorphism) was observably violated.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A glued or transported map landed in a component with the wrong tag.
    #[error("tag mismatch: expected component tag {expected}, found {found}")]
    TagMismatch { expected: Code, found: Code },

    /// A code was queried that is not in the relevant universe.
    #[error("code {0} is not in the universe")]
    NotInUniverse(Code),

    /// A truncation was requested over an infinite signature family with no
    /// index bound for it.
    #[error("signature family {family} is infinite and no prefix bound was supplied")]
    UnboundedSignature { family: u32 },

    /// Bad argument to a builder (empty component list, zero bound, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl StructureError {
    pub fn invariant(msg: impl Into<String>) -> Self {
        StructureError::InvariantViolation(msg.into())
    }
}
