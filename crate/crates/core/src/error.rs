//! Error types shared across the crate.

use crate::domination::{ClosureDirection, PosequenceError};

/// Errors returned by library operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A bit index lies outside `[0, 2^n)`.
    #[error("bit index {value} out of range for order n={n}")]
    IndexOutOfRange { value: u32, n: u32 },

    /// Two arguments carry different code orders.
    #[error("code order mismatch: n={left} vs n={right}")]
    OrderMismatch { left: u32, right: u32 },

    /// The requested order is larger than this operation supports.
    #[error("order n={n} is unsupported here (maximum n={max})")]
    UnsupportedOrder { n: u32, max: u32 },

    /// A pattern violates the required domination closure.
    #[error("pattern is not {direction}-closed: contains {member} but not {missing}")]
    PatternNotClosed {
        direction: ClosureDirection,
        member: u32,
        missing: u32,
    },

    /// A sequence failed posequence validation.
    #[error("invalid posequence: {0}")]
    InvalidPosequence(#[from] PosequenceError),

    /// The information length does not fit the available split channels.
    #[error("information length {k} exceeds the {capacity} available split channels")]
    CapacityExceeded { k: u32, capacity: u32 },

    /// A malformed argument that fits no more specific category.
    #[error("{0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag, used by the CLI for diagnostics and
    /// exit-code mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::OrderMismatch { .. } => "order-mismatch",
            Error::UnsupportedOrder { .. } => "unsupported-size",
            Error::PatternNotClosed { .. } => "invalid-pattern",
            Error::InvalidPosequence(_) => "invalid-pattern",
            Error::CapacityExceeded { .. } => "capacity",
            Error::InvalidArgument(_) => "argument",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
