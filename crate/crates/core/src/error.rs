use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid crystal label B^{{{rows},{cols}}} at rank {n}")]
    InvalidLabel { n: usize, rows: usize, cols: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("not a semistandard tableau of shape {rows}x{cols} on letters 1..={top}: {text}")]
    NotSemistandard { rows: usize, cols: usize, top: usize, text: String },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("combinatorial R on {left} (x) {right}: {msg}")]
    RTable { left: String, right: String, msg: String },

    #[error("carriers with identical output disagree on degrees for T({r},{l})")]
    AmbiguousEnergy { r: usize, l: usize },

    #[error("energy E({color},j) has no plateau by j = {cutoff}")]
    NoPlateau { color: usize, cutoff: usize },

    #[error("energies E({color},j) are not concave at j = {length}")]
    NegativeContent { color: usize, length: usize },

    #[error("state is not ({color},{length})-evolvable")]
    NotEvolvable { color: usize, length: usize },

    #[error("orbit dies after {step} steps at {state}")]
    Dies { step: u64, state: String },

    #[error("det F vanishes for content {content}")]
    SingularF { content: String },

    #[error("fermionic count is not an integer for content {content}: {value}")]
    NonIntegralOmega { content: String, value: String },

    #[error("state {state} has content {content} with a negative vacancy number")]
    InvalidContent { state: String, content: String },

    #[error("weight is not dominant for content {content}")]
    NotDominant { content: String },

    #[error("state space has {size} states, above the bound {bound}")]
    TooManyStates { size: u128, bound: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("R-table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
