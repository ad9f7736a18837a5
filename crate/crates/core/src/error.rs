use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level r = {0} must satisfy r >= 5 and r = 1 (mod 4)")]
    InvalidLevel(i64),
    #[error("lens space L({p},{q}) requires p >= 1 and gcd(p, q) = 1")]
    InvalidLens { p: i64, q: i64 },
    #[error("matrix ({a}, {b}; {c}, {d}) does not have determinant 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },
    #[error("continued fraction must have at least one entry")]
    EmptyContinuedFraction,
    #[error("{num}/{den} has no continued fraction of the required shape")]
    NoExpansion { num: i64, den: i64 },
    #[error("convergent a_{index} vanishes; closed form undefined")]
    DegenerateConvergent { index: usize },
    #[error("lower-left entry c = 0; closed form undefined")]
    ZeroLowerLeft,
    #[error("index {index} outside 1..={dim}")]
    IndexOutOfRange { index: i64, dim: usize },
    #[error("invalid reciprocity data: {0}")]
    InvalidReciprocity(String),
    #[error("cyclotomic data invalid: {0}")]
    InvalidCyclotomic(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
