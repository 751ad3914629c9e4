use thiserror::Error;

/// Errors raised by graph, pattern and search operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge index {index} out of range for a graph with {edges} edges")]
    EdgeIndex { index: usize, edges: usize },
    #[error("vertex {vertex} out of range for a graph with {vertices} vertices")]
    VertexIndex { vertex: usize, vertices: usize },
    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("edge {0} is a bridge")]
    BridgeEdge(usize),
    #[error("edge {0} is distinguished and cannot be operated on")]
    DistinguishedEdge(usize),
    #[error("graph has no distinguished edge")]
    NoDistinguishedEdge,
    #[error("coordinate {coord} out of range for strings of length {len}")]
    Coordinate { coord: usize, len: usize },
    #[error("pattern kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: &'static str, found: &'static str },
    #[error("layer mismatch: {0}")]
    Layer(String),
    #[error("pattern graph is disconnected")]
    DisconnectedPatternGraph,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("the empty pattern is contained in every set; its extremal number is undefined")]
    EmptyPattern,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
