use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LppeError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: sort mismatch: {msg}")]
    SortMismatch { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: duplicate declaration of `{name}`")]
    Duplicate { line: usize, col: usize, name: String },
    #[error("summand {summand} at state {state} with locals [{locals}]: {msg}")]
    IllFormedSummand { summand: usize, state: String, locals: String, msg: String },
    #[error("summand {summand} enumerates {count} local/probabilistic combinations, above the cap of {cap}")]
    EnumerationCap { summand: usize, count: u128, cap: u128 },
    #[error("state cap of {cap} exceeded")]
    StateCap { cap: usize },
    #[error("evaluation error: {0}")]
    Eval(String),
}
