use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity {arity} exceeds the horizon {horizon}")]
    HorizonExceeded { arity: usize, horizon: usize },
    #[error("position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("operad is not unitary: {0}")]
    NotUnitary(String),
    #[error("no 2-unit exists: {0}")]
    NoTwoUnit(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not an S-submodule: {0}")]
    NotSubmodule(String),
    #[error("algebra is not associative: {0}")]
    NotAssociative(String),
    #[error("invalid ideal chain: {0}")]
    InvalidChain(String),
    #[error("operad is not Com-augmented: {0}")]
    NotComAugmented(String),
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, OperadError>;

impl From<std::io::Error> for OperadError {
    fn from(e: std::io::Error) -> Self {
        OperadError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for OperadError {
    fn from(e: serde_json::Error) -> Self {
        OperadError::Schema(e.to_string())
    }
}
