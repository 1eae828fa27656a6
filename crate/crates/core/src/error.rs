use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("a graph needs at least one node")]
    NoNodes,

    #[error("edge endpoint {node} is out of range for a graph with {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },

    #[error("degenerate component: the largest connected component has {0} node(s)")]
    DegenerateComponent(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stub total {0} is odd")]
    OddStubTotal(usize),

    #[error("inconsistent statistics: {0}")]
    InconsistentStats(String),

    #[error("graph has no edges")]
    NoEdges,

    #[error("no layer-preserving sample found after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
