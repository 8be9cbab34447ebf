use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("element set mixes vertices and edges")]
    MixedElementKinds,
    #[error("edges {0} and {1} share no endpoint")]
    NoSharedEndpoint(EdgeId, EdgeId),
    #[error("lifting edges {0} and {1} would create a loop")]
    WouldCreateLoop(EdgeId, EdgeId),
    #[error("loops are not allowed (vertex {0})")]
    Loop(VertexId),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("search budget exceeded in {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("invalid subtree family: {0}")]
    InvalidFamily(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid tree partition: {0}")]
    InvalidPartition(String),
    #[error("packing oracle inconsistent: {0}")]
    OracleFailure(String),
    #[error("ceiling violated: parameter {observed} exceeds f({pack}) = {ceiling}")]
    CeilingViolated {
        observed: usize,
        pack: usize,
        ceiling: usize,
    },
    #[error("parameter estimate unavailable: {0}")]
    ParameterEstimateUnavailable(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("routing failed: {0}")]
    RoutingFailed(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for EpError {
    fn from(e: std::io::Error) -> Self {
        EpError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for EpError {
    fn from(e: serde_json::Error) -> Self {
        EpError::Parse {
            line: e.line(),
            msg: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, EpError>;
