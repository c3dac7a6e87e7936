use thiserror::Error;

use crate::word::Letter;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("letter {0} is not covered by the assignment")]
    UncoveredLetter(Letter),
    #[error("{0} has no finite word basis in the catalog")]
    NoWordBasis(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("malformed monoid: {0}")]
    Monoid(String),
    #[error("unknown case: {0}")]
    UnknownCase(String),
}

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
