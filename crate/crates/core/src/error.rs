use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("vertex {0} already exists or was used before")]
    VertexReused(VertexId),
    #[error("edge {0}-{1} already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("self-loop at {0}")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} not present")]
    MissingEdge(VertexId, VertexId),
    #[error("edge {0}->{1} is not oriented that way")]
    WrongOrientation(VertexId, VertexId),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("op #{index}: {source}")]
    AtOp {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("reset cascade watchdog: {flips} flips after {updates} updates on {vertices} vertices")]
    Watchdog {
        flips: u64,
        updates: u64,
        vertices: usize,
    },

    #[error("arboricity promise broken: {0}")]
    Promise(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oracle refused: {0}")]
    OracleLimit(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("round limit {limit} exceeded; last messages: {tail}")]
    RoundLimit { limit: u64, tail: String },

    #[error("protocol failure: {0}")]
    Protocol(String),

    #[error("memory ceiling exceeded at node {node}: {entries} entries > {budget}")]
    Memory {
        node: VertexId,
        entries: usize,
        budget: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn at(self, index: usize) -> Error {
        match self {
            e @ Error::AtOp { .. } => e,
            other => Error::AtOp {
                index,
                source: Box::new(other),
            },
        }
    }

    /// Strips any op-index wrapper.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtOp { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
