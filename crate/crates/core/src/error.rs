use thiserror::Error;

use crate::graph::Graph;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has {n} vertices, at most {max} are supported")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("inflation part {0} is empty")]
    EmptyPart(usize),
    #[error("expected {expected} inflation parts, found {found}")]
    PartCountMismatch { expected: usize, found: usize },
    #[error("graph needs at least {min} vertices, has {n}")]
    TooFewVertices { n: usize, min: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("vertex {0} inserted twice")]
    DuplicateVertex(usize),
    #[error("step {step}: labels must differ, both are {label}")]
    EqualLabels { step: usize, label: u32 },
    #[error("step {step}: label 0 is not allowed, labels are positive")]
    ZeroLabel { step: usize },
    #[error("inserted vertex ids are not 0..{expected}: missing {missing}")]
    NonContiguousVertices { expected: usize, missing: usize },
    #[error("vertex {0} is never inserted by the expression")]
    VertexNotInserted(usize),
    #[error("part {x} has width {width_x} but part {widest} is wider ({width_widest})")]
    NotWidestPart { x: usize, width_x: usize, widest: usize, width_widest: usize },

    #[error("linear clique-width exceeds the budget cap {cap}")]
    BudgetExceeded { cap: usize },
    #[error("graph on {n} vertices exceeds the size limit {limit} of {what}")]
    SizeLimit { n: usize, limit: usize, what: &'static str },
    #[error("prime oracle failed on skeleton {graph6}: {source}")]
    Oracle { graph6: String, skeleton: Box<Graph>, source: Box<Error> },
    #[error("graph is not quasi-threshold: vertices {witness:?} induce a {pattern}")]
    NotQuasiThreshold { witness: [usize; 4], pattern: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
