use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("q = {0} exceeds the supported ceiling of 16")]
    FieldTooLarge(u32),
    #[error("x^2 - {t1}x - {t0} is not primitive over F_{q}")]
    NotPrimitive { q: u32, t1: u32, t0: u32 },
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("polynomial degree {0} is above the supported bound")]
    DegreeTooHigh(usize),
    #[error("span of an empty list")]
    EmptySpan,
    #[error("enumeration of {0} points exceeds the budget")]
    BudgetExceeded(u128),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point lies on the line at infinity")]
    AtInfinity,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("intersection at infinity is not a union of lines: {0}")]
    NotUnionOfLines(String),
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
