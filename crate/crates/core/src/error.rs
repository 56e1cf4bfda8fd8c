use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable sets differ: {0} vs {1}")]
    VarSetMismatch(String, String),
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative exponent in a polynomial (non-Laurent) context")]
    NegativeExponent,
    #[error("zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("no value assigned to variable {0}")]
    MissingVariable(String),
    #[error("division by zero while evaluating {0}")]
    DivisionByZero(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("degree must be at least -1, got {0}")]
    DegreeTooLow(i64),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("zero element has no lowest word")]
    ZeroElement,
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("element is not multilinear: {0}")]
    NotMultilinear(String),
    #[error("no value assigned to generator y{0}")]
    UnassignedGenerator(u32),
    #[error("word {0} is not a multilinear special reduced word")]
    NotInW(String),
    #[error("monomial {0} is not the leading monomial of a multilinear special reduced word")]
    BadLeadingMonomial(String),
    #[error("exponent {0} does not specialize to an integer")]
    NonIntegralExponent(String),
    #[error("degree {degree} exceeds the target dimension n = {n}")]
    DegreeExceedsDimension { degree: usize, n: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
