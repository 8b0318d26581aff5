use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("edge {edge} out of range (graph has {count} edges)")]
    EdgeOutOfRange { edge: usize, count: usize },
    #[error("weights list has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("edge {0} is a tadpole and cannot be contracted here")]
    TadpoleContraction(usize),
    #[error("only single-edge collapses are supported (got {0} collapsed edges)")]
    MultiEdgeCollapse(usize),
    #[error("invalid ribbon structure: {0}")]
    InvalidRibbon(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("unbounded enumeration: {0}")]
    Unbounded(String),
    #[error("inconsistent request: {0}")]
    InconsistentSpec(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("too many edges for a subset mask: {0} (limit 64)")]
    TooManyEdges(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
