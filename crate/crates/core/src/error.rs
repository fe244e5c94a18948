use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("coordinate index {index} is out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error(
        "polynomial is not semi-invariant mod {m}: monomial {first} has class {first_class} \
         but monomial {second} has class {second_class}"
    )]
    NotSemiInvariant {
        m: u64,
        first: String,
        first_class: u64,
        second: String,
        second_class: u64,
    },

    #[error("the weight of the zero polynomial is undefined")]
    UndefinedWeight,

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("enumeration box of {requested} points exceeds the cap of {cap}")]
    EnumerationLimit { requested: u128, cap: u64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Stable machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidWeights(_) => "invalid-weights",
            Error::Dimension { .. } | Error::IndexOutOfRange { .. } => "dimension",
            Error::NotSemiInvariant { .. } => "not-semi-invariant",
            Error::UndefinedWeight => "undefined-weight",
            Error::UnsupportedShape(_) => "unsupported-shape",
            Error::InvalidInstance(_) => "invalid-instance",
            Error::Parse { .. } => "parse",
            Error::OutOfDomain(_) => "out-of-domain",
            Error::Overflow(_) => "overflow",
            Error::EnumerationLimit { .. } => "enumeration-limit",
            Error::Consistency(_) => "internal-consistency",
        }
    }

    /// True for failures of a cross-check that should never disagree.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
