use thiserror::Error;

use crate::wire::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is singular (rank {rank} of {expected})")]
    Singular { rank: usize, expected: usize },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("field GF({q}) too small for a code of length {needed}{}", context_suffix(.context))]
    FieldTooSmall {
        q: u64,
        needed: usize,
        context: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("coordinate {0} appears more than once")]
    DuplicateCoordinate(usize),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("need answers from {needed} distinct databases, got {got}")]
    NotEnoughAnswers { needed: usize, got: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
