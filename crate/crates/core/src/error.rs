use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vertex budget exceeded: {required} vertices requested, budget is {budget}")]
    Budget { required: u128, budget: usize },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("function handle violates axiom '{axiom}': {detail}")]
    Audit { axiom: &'static str, detail: String },

    #[error("invalid probabilistic model: edge {edge} sums to {sum}")]
    InvalidModel { edge: usize, sum: f64 },

    #[error("no classical models: scenario admits no deterministic model")]
    NoClassicalModels,

    #[error("enumeration aborted after {0} partial assignments")]
    EnumerationLimit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
