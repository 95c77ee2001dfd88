use thiserror::Error;

/// Errors raised by model construction, compilation and bounding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{variable}` has no value `{value}`")]
    UnknownValue { variable: String, value: String },
    #[error("invalid domain for `{0}`")]
    InvalidDomain(String),
    #[error("cycle through {0:?}")]
    Cycle(Vec<String>),
    #[error("order is not topological: {0}")]
    NotTopological(String),
    #[error("missing CPD entry at {0}")]
    MissingCpd(String),
    #[error("invalid credal set: {0}")]
    InvalidCredalSet(String),
    #[error("credal set is not a point at {0}")]
    NotPoint(String),
    #[error("name collision: `{0}` already exists")]
    NameCollision(String),
    #[error("invalid decision table: {0}")]
    InvalidDecision(String),
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("missing parameter for {0}")]
    MissingParameter(String),
    #[error("unassigned weights at sum node {0}")]
    UnassignedWeights(usize),
    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("size guard exceeded: {what} ({size} > {limit})")]
    GuardExceeded { what: &'static str, size: u128, limit: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
