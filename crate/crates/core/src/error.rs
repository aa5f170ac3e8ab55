use thiserror::Error;

use crate::model::CrossingId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("adjacent edges: {0:?} and {1:?} share an endpoint")]
    AdjacentEdges((usize, usize), (usize, usize)),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),
    #[error("non-planar drawing: euler characteristic {0}")]
    NonPlanarDrawing(i64),
    #[error("unknown crossing {0}")]
    UnknownCrossing(CrossingId),
    #[error("log mismatch: {0}")]
    LogMismatch(String),
    #[error("estar is not outerplanar for this order: edges {0} and {1} interleave")]
    NotOuterplanar(usize, usize),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("empty instance")]
    EmptyInstance,
    #[error("instance too large for oracle: {edges} edges exceeds cap {cap}")]
    TooLargeForOracle { edges: usize, cap: usize },
    #[error("missing geometry")]
    MissingGeometry,
    #[error("invalid block move ({i}, {j}, {k}) on a sequence of length {len}")]
    InvalidBlockMove { i: usize, j: usize, k: usize, len: usize },
    #[error("invalid metro instance: {0}")]
    InvalidMetro(String),
    #[error("unknown {kind} {id}")]
    UnknownId { kind: &'static str, id: String },
    #[error("cap {0} exhausted without a feasible solution")]
    CapExhausted(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
