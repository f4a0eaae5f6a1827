use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed scalar `{0}`")]
    ScalarSyntax(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not hermitian")]
    NotHermitian,

    #[error("matrix is singular")]
    Singular,

    #[error("hermitian form is not positive definite")]
    IndefiniteForm,

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("rewriting exceeded the step budget of {0}")]
    ReductionBudgetExceeded(usize),

    #[error("tensor leg is not in the kernel of the character")]
    LegNotInKernel,

    #[error("relation {relator} violated, residual {residual}")]
    RelationViolated { relator: String, residual: String },

    #[error("generator `{0}` is not compatible with the involution")]
    NotStarCompatible(String),

    #[error("cocycle obstructed on {relator}, residual {residual}")]
    CocycleObstructed { relator: String, residual: String },

    #[error("operation requires a group presentation")]
    NotAGroup,

    #[error("no normal form configured for this presentation")]
    NoNormalForm,

    #[error("normal form does not fit the presentation: {0}")]
    NormalFormMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
