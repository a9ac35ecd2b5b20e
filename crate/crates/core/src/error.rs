use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// `Invariant` is reserved for outcomes that a proven statement rules out;
/// seeing one means the implementation (or the floating point tolerance) is
/// wrong, not the input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },

    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("vertex {vertex} out of range (graph has {n_vertices} vertices)")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("edge {edge} out of range (graph has {n_edges} edges)")]
    EdgeOutOfRange { edge: usize, n_edges: usize },

    #[error("{what}: size {actual} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        actual: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
