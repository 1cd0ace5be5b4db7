use thiserror::Error;

use crate::hensel::NewtonStep;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: expected a prime p >= 5")]
    InvalidPrime(u64),

    #[error("invalid precision {0}: expected a positive number of digits")]
    InvalidPrecision(i64),

    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("not a square: {0}")]
    NotSquare(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular curve: {0}")]
    Singular(String),

    #[error("Hensel hypothesis fails: val F(a) = {val_f}, val F'(a) = {val_df}")]
    HenselHypothesis { val_f: i64, val_df: i64 },

    #[error("Newton iteration stalled after {} steps", transcript.len())]
    NewtonStalled { transcript: Vec<NewtonStep> },

    #[error("torsion certification mismatch: {0}")]
    Certification(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "invalid_prime",
            Error::InvalidPrecision(_) => "invalid_precision",
            Error::PrimeMismatch(..) => "prime_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::NotSquare(_) => "not_square",
            Error::Domain(_) => "domain",
            Error::Singular(_) => "singular",
            Error::HenselHypothesis { .. } => "hensel_hypothesis",
            Error::NewtonStalled { .. } => "newton_stalled",
            Error::Certification(_) => "certification_mismatch",
            Error::Invariant(_) => "invariant",
            Error::Parse(_) => "parse",
        }
    }
}
