use thiserror::Error;

use crate::alphabet::Symbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet bounds {min}..={max}")]
    InvalidAlphabet { min: u32, max: u32 },

    #[error("symbol {symbol} is outside the alphabet {min}..={max}")]
    SymbolOutOfRange { symbol: Symbol, min: Symbol, max: Symbol },

    #[error("operands are defined over different alphabets")]
    AlphabetMismatch,

    #[error("malformed border function: {0}")]
    MalformedBorderFunction(String),

    /// A transition leaves the range of states the automaton kind allows.
    #[error("state {state}: target {target} outside the allowed range {low}..={high}")]
    TargetOutOfRange { state: usize, target: i64, low: usize, high: usize },

    #[error("invalid token class name `{0}`")]
    InvalidClassName(String),

    #[error("a classifier needs at least one state")]
    EmptyClassifier,

    #[error("classifier is ill-formed: state {state} (class {class}) is reachable from state 1 by epsilon transitions alone")]
    IllFormed { state: usize, class: String },

    #[error("automaton is not deterministic: state {state} has epsilon transitions")]
    NotDeterministic { state: usize },

    #[error("operation needs a non-empty state set")]
    EmptyStateSet,

    #[error("state {state} does not exist (automaton has {len} states)")]
    NoSuchState { state: usize, len: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown scanner template `{0}`")]
    UnknownTemplate(String),

    /// A postcondition of an internal algorithm failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }

    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
