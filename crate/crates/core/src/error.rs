use thiserror::Error;

use crate::expr::ParseError;
use crate::qfield::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("derivation is not well defined: relation {0} fails")]
    Relation(String),
    #[error("malformed chain: {0}")]
    Chain(String),
    #[error("unknown cochain {0:?}")]
    UnknownCochain(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("unknown functional {0:?}")]
    UnknownFunctional(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
