use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("even characteristic unsupported (p = {0})")]
    EvenCharacteristic(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("inversion of zero")]
    ZeroInverse,

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("duplicate matrix entry at row {row}, column {col}")]
    DuplicateEntry { row: usize, col: usize },

    #[error("map does not respect its grading contract: {0}")]
    GradingViolation(String),

    #[error("d∘d ≠ 0 at weight {weight}, t = {t}, word length {length}")]
    NonZeroComposite { weight: u32, t: i64, length: usize },

    #[error("bracket word of weight {weight} exceeds the basis bound {max}")]
    WeightOverflow { weight: u32, max: u32 },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("weight {k} > p = {p} unsupported")]
    WeightAboveP { k: u32, p: u64 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Exit-code class of an error, used by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A computed identity failed to hold.
    Mismatch,
    /// The request itself was malformed.
    InvalidInput,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonZeroComposite { .. } | Error::GradingViolation(_) => ErrorClass::Mismatch,
            _ => ErrorClass::InvalidInput,
        }
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorClass::Mismatch => f.write_str("mismatch"),
            ErrorClass::InvalidInput => f.write_str("invalid input"),
        }
    }
}
