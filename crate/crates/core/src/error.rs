use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero at evaluation point")]
    DivisionByZero,

    #[error("need {needed} coefficient pairs, only {available} available")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("sequence is not normalized: {0}")]
    NotNormalized(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("degenerate quadratic relation: {0}")]
    DegenerateRelation(String),

    #[error("branch ambiguity at z = {re} + {im}i")]
    BranchAmbiguity { re: f64, im: f64 },

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("not an m-function: {0}")]
    NotAnMFunction(String),

    #[error("series order {got} too small, need at least {needed}")]
    InsufficientOrder { needed: usize, got: usize },

    #[error("evaluation point {re} + {im}i is not in the open upper half-plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
