use thiserror::Error;

/// Errors raised by the planning toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("time index {k} outside [0, {horizon}]")]
    TimeOutOfRange { k: usize, horizon: usize },

    #[error("operator applied to an empty operand list")]
    EmptyOperands,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("unknown robustness measure `{0}`")]
    UnknownMeasure(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("a scheme with fewer than two intervals has no thresholds; use the single-interval scheme")]
    SingleIntervalScheme,

    #[error("enumeration of {estimate} rollouts exceeds the limit of {limit}")]
    EnumerationTooLarge { estimate: u128, limit: u128 },

    #[error("system step failed: {0}")]
    Dynamics(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("no sample produced a finite rollout")]
    NoValidSample,

    #[error("MPC iteration {iteration}: {source}")]
    Mpc {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
