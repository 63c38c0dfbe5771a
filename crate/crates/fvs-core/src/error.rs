use crate::graph::VertexId;
use thiserror::Error;

/// Crate-wide error type. Verification failures that contradict a proven
/// bound get their own variants so callers can tell "bad input" from
/// "the machinery found a counterexample to something that must hold".
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} not in graph")]
    UnknownVertex(VertexId),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge index {0} out of range")]
    BadEdgeIndex(usize),
    #[error("cannot contract a self-loop")]
    ContractLoop,
    #[error("cycle enumeration exceeded budget of {0}")]
    CycleBudget(usize),
    #[error("no solution within size limit {0}")]
    SizeLimit(usize),
    #[error("infeasible solution: {0}")]
    Infeasible(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate drawing: {0}")]
    Degenerate(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("no balanced separator found")]
    NoSeparator,
    #[error("construction invariant violated: {0}")]
    Construction(String),
    #[error("proven bound violated: {0}")]
    BoundViolated(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
