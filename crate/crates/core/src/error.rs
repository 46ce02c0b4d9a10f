use std::fmt;

use num_bigint::BigUint;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: Position, message: String },

    #[error("enumeration too large: {what} has {cardinality} elements (budget {budget})")]
    Budget {
        what: String,
        cardinality: Cardinality,
        budget: u64,
    },

    #[error("support overflow in iterate {iterate}: mode {mode} lies outside the box of radius {radius}")]
    SupportOverflow {
        iterate: usize,
        mode: String,
        radius: u32,
    },

    #[error("quadrature tolerance not met: estimated error {estimate:e} > {tolerance:e} with {panels} panels")]
    Quadrature {
        estimate: f64,
        tolerance: f64,
        panels: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Location inside a parsed text input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Offset(usize),
    LineColumn { line: usize, column: usize },
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Offset(o) => write!(f, "byte {o}"),
            Position::LineColumn { line, column } => write!(f, "line {line}, column {column}"),
        }
    }
}

/// Exact size of an enumeration that was refused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cardinality {
    Exact(BigUint),
    /// Only a lower bound was established before giving up.
    AtLeast(u64),
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Exact(n) => write!(f, "{n}"),
            Cardinality::AtLeast(n) => write!(f, "at least {n}"),
        }
    }
}

impl Error {
    pub(crate) fn parse_at(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position: Position::Offset(offset),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            position: Position::LineColumn {
                line: e.line(),
                column: e.column(),
            },
            message: e.to_string(),
        }
    }
}
