use crate::algebra::Field;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {0} out of range")]
    DegreeOutOfRange(i32),
    #[error("not a chain complex: {0}")]
    NotAChainComplex(String),
    #[error("filtration violation: {0}")]
    Filtration(String),
    #[error("invalid cospan: {0}")]
    InvalidCospan(String),
    #[error("invalid summand: {0}")]
    InvalidSummand(String),
    #[error("point ({0}, {1}) is outside the strip")]
    OutsideStrip(String, String),
    #[error("points are not ordered: {0}")]
    NotOrdered(String),
    #[error("lambda mismatch: {0} vs {1}")]
    LambdaMismatch(String, String),
    #[error("singular matrix")]
    Singular,
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}
