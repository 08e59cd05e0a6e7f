use thiserror::Error;

/// Errors raised by hypergraph construction, the oracles and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hypergraph must have at least one vertex")]
    NoVertices,
    #[error("hyperedge {edge} is empty")]
    EmptyHyperedge { edge: usize },
    #[error("hyperedge {edge} has a single distinct vertex")]
    SingletonHyperedge { edge: usize },
    #[error("hyperedge {edge} has non-positive or non-finite weight {weight}")]
    NonpositiveWeight { edge: usize, weight: f64 },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vector entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("cut is degenerate: the set is empty or the whole vertex set")]
    DegenerateCut,
    #[error("vector is constant, no direction orthogonal to the ones vector")]
    ConstantVector,
    #[error("hypergraph is disconnected")]
    DisconnectedGraph,
    #[error("invalid cut function: {0}")]
    InvalidCutFunction(String),
    #[error("norm assignment does not match the hypergraph: {0}")]
    NormMismatch(String),
    /// The best iterate found is attached so callers can still use it.
    #[error("frank-wolfe did not reach tolerance after {iterations} iterations (gap {gap:e})")]
    ToleranceNotReached {
        iterations: usize,
        gap: f64,
        best: Vec<f64>,
    },
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("poincare constants must be positive with lower <= upper (lower {lower}, upper {upper})")]
    NonpositiveConstants { lower: f64, upper: f64 },
    #[error("resolvent problem is unbounded: lambda = 0 and the seed is not balanced (<s, 1> = {0:e})")]
    Unbounded(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
