use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaError {
    #[error("probability {0} is outside [0, 1]")]
    ProbOutOfRange(String),
    #[error("distribution sums to {0}, expected 1")]
    NotNormalized(String),
    #[error("sub-distribution sums to {0}, which exceeds 1")]
    SubNormExceeded(String),
    #[error("empty distribution")]
    EmptyDistribution,
    #[error("unknown state id {0}")]
    UnknownState(usize),
    #[error("unknown state name `{0}`")]
    UnknownStateName(String),
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("unknown transition id {0}")]
    UnknownTransition(usize),
    #[error("no initial state declared")]
    NoInitial,
    #[error("state {0} lies outside the partition carrier")]
    CarrierMismatch(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid path step: {0}")]
    InvalidPath(String),
    #[error("cannot parse probability `{0}`")]
    BadProb(String),
}
