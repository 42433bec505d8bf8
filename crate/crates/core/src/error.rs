//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("node {0} is out of range for a graph of {1} nodes")]
    NodeOutOfRange(usize, usize),
    #[error("self-loop on node {0} rejected")]
    SelfLoop(usize),
    #[error("node {0} has been removed")]
    DeadNode(usize),
    #[error("operation requires a directed graph")]
    RequiresDirected,
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("generator infeasible: {0}")]
    Infeasible(String),
    #[error("generator did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("unknown network model `{0}`")]
    UnknownModel(String),
    #[error("attack sequence is not a permutation of the live nodes")]
    InvalidSequence,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("backward requires a scalar loss, got shape {0:?}")]
    NonScalarLoss(Vec<usize>),
    #[error("tape already consumed by a previous backward pass")]
    TapeConsumed,
    #[error("graph of {n} nodes is below the model minimum of {min}")]
    GraphTooSmall { n: usize, min: usize },
    #[error("training diverged (non-finite loss) at step {step}")]
    Divergence { step: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("unsupported checkpoint format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid statistics input: {0}")]
    Stats(String),
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{0}")]
    Format(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("instance {id} (seed {seed}): {source}")]
    Instance {
        id: String,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
