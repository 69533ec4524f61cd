use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{what} exceeds the feasibility cap ({actual} > {limit})")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} is isolated; no embedded index code exists")]
    IsolatedVertex(usize),

    #[error("matrix does not represent the graph: {0}")]
    PatternViolation(String),

    #[error("invalid neighborhood partition: {0}")]
    InvalidPartition(String),

    #[error("structural violation: {0}")]
    Structural(String),

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn cap(what: &'static str, limit: u64, actual: u64) -> Self {
        Error::CapExceeded {
            what,
            limit,
            actual,
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
