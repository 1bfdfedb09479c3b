use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} repeats vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("edge {edge} has size {size}, minimum is 2")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("edges {first} and {second} have the same vertex set")]
    DuplicateEdge { first: usize, second: usize },
    #[error("input is not a hypertree")]
    NotHypertree,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("{n} vertices exceeds the enumeration bound of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("stub count {total} for edge size {size} is not divisible by {size}")]
    Divisibility { size: usize, total: u64 },
    #[error("invalid type distribution: {0}")]
    Distribution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
