use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node index {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("vector length {got} does not match node count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("no weight given for node id {0}")]
    MissingWeight(u64),

    #[error("invalid weight {weight} for node {node}: weights must be finite and non-negative")]
    InvalidWeight { node: usize, weight: f64 },

    #[error("operation needs at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },

    #[error("power iteration produced a zero vector after {0} attempts")]
    ZeroVector(usize),

    #[error("invalid dismantling plan: {0}")]
    InvalidPlan(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
