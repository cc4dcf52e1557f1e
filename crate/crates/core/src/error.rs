//! Error types shared across the crate.

use thiserror::Error;

/// Errors from the jet-algebra layer (parsing, substitution, reduction).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum JetError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("exponent must be a non-negative integer literal, found {found}")]
    BadExponent { found: String },
    #[error("unknown identifier '{name}'")]
    UnknownIdentifier { name: String },
    #[error("prime depth {depth} exceeds the maximum of {max}")]
    PrimeDepth { depth: usize, max: usize },
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("unbound variable {var} in evaluation")]
    UnboundVariable { var: String },
    #[error("unsupported reduction: {reason}")]
    UnsupportedReduction { reason: String },
}
