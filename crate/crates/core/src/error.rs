use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported Cartan type {family}{rank}")]
    UnsupportedType { family: String, rank: usize },
    #[error("invalid node label {0}")]
    InvalidNode(u8),
    #[error("word is not reduced: {0}")]
    NotReduced(String),
    #[error("word of length {found} does not represent the longest element (expected length {expected})")]
    NotLongest { expected: usize, found: usize },
    #[error("move {kind} not applicable at position {position}: {reason}")]
    MoveNotApplicable {
        position: usize,
        kind: &'static str,
        reason: String,
    },
    #[error("word {word:?} does not end with letter {letter}")]
    WrongLastLetter { word: Vec<u8>, letter: u8 },
    #[error("monomial {exponent} has no bracket partner")]
    Unpairable { exponent: String },
    #[error("conjugation by the quantum dilogarithm needs an even commutation exponent, got {0}")]
    OddExponent(i64),
    #[error("transport left a non-polynomial residue with denominator {0}")]
    NonPolynomial(String),
    #[error("lambda normalization failed at position {position}: beta = {beta}")]
    NonPositiveBeta { position: usize, beta: String },
    #[error("index {0} outside the triangular range")]
    OutOfRange(String),
    #[error("classical coordinates must be positive")]
    NonPositive,
    #[error("term limit of {limit} exceeded ({found} terms)")]
    TermLimit { limit: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
