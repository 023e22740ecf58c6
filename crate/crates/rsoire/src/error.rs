//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, enumeration, and the learner.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Expression or word syntax error, with the byte offset of the offending input.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// A symbol name fell outside the allowed token class.
    #[error("invalid symbol name {0:?}")]
    InvalidSymbol(String),

    /// The learner and the automaton builder require at least one sample word.
    #[error("empty sample")]
    EmptySample,

    /// The rewrite engine ran out of applicable rules with more than one
    /// internal node left. Carries a DOT dump of the stuck automaton.
    #[error("no rewrite rule applies to the remaining automaton:\n{dot}")]
    Stuck { dot: String },

    /// Bounded enumeration exceeded its word-count budget.
    #[error("enumeration exceeded the word-count cap of {cap}")]
    EnumerationCap { cap: usize },

    /// Sampling could not cover all words of length <= 2 within the word budget.
    #[error("sample truncation to {cap} words would drop words of length <= 2")]
    SampleCap { cap: usize },

    /// Graph surgery was asked to contract an invalid node set.
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),

    /// An adjacency query named a node that is not in the automaton.
    #[error("unknown node id {0}")]
    UnknownNode(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
