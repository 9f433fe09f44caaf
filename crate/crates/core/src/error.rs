use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("cycle detected through `{0}`")]
    Cycle(String),
    #[error("{0} is not a prime usable as a field size")]
    InvalidField(u64),
    #[error("expected 3 sources, found {0}")]
    UnsupportedSources(usize),
    #[error("region graph is not basic: {0}")]
    NotBasic(String),
    #[error("region `{0}` reaches no terminal region")]
    NotPruned(String),
    #[error("missing value for `{0}`")]
    Missing(String),
    #[error("decomposition invalid: {0}")]
    BadDecomposition(String),
    #[error("partition invalid: {0}")]
    BadPartition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("vector family construction exhausted at set {step} over GF({p})")]
    FamilyExhausted { step: usize, p: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
