use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("invalid {family} parameter {n}: {reason}")]
    InvalidFamily {
        family: &'static str,
        n: usize,
        reason: &'static str,
    },
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("{u} and {v} are not adjacent in the base graph")]
    NotAnEdge { u: usize, v: usize },
    #[error("token count and capacity must be positive (k = {k}, s = {s})")]
    InvalidTokenSpec { k: usize, s: usize },
    #[error("invalid configuration {entries:?}: {reason}")]
    InvalidConfiguration { entries: Vec<usize>, reason: &'static str },
    #[error("configurations have different token modes or token counts")]
    ModeMismatch,
    #[error("index {index} out of range (order {order})")]
    IndexOutOfRange { index: String, order: String },
    #[error("per-edge counts need a base graph with at least two vertices (n = {n})")]
    NoEdge { n: usize },
    #[error("graph of order {order} exceeds the cap of {cap} vertices")]
    TooLarge { order: String, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
