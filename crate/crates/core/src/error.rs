use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected")]
    DisconnectedGraph,

    #[error("edge ({u}, {v}) has negative or non-finite weight {weight}")]
    NegativeWeight { u: usize, v: usize, weight: f64 },

    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: String },

    #[error("cluster is empty")]
    EmptyCluster,

    #[error("vertex set is empty")]
    EmptySet,

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("more than {cap} shortest paths between {u} and {v}")]
    PathExplosion { u: usize, v: usize, cap: usize },

    #[error("no centers given")]
    NoCenters,

    #[error("shift resampling gave up after {0} attempts")]
    ResampleLimitExceeded(usize),

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph is not chordal; chordless cycle {cycle:?}")]
    NotChordal { cycle: Vec<usize> },

    #[error("graph is not a cactus; edge ({0}, {1}) lies on two cycles")]
    NotCactus(usize, usize),

    #[error("edge ({u}, {v}) has weight {weight}, expected unit weights")]
    NonUnitWeight { u: usize, v: usize, weight: f64 },

    #[error("level {level} part {part}: path is not a shortest path")]
    NotShortestPath { level: usize, part: usize },

    #[error("level {level}: parts are not the components left after path removal")]
    NotComponentRefinement { level: usize },

    #[error("vertex {0} is never removed by the hierarchy")]
    VertexMissed(usize),

    #[error("vertex {0} is not padded by any cluster")]
    NotACover(usize),

    #[error("partition violates the declared scheme guarantee: {0}")]
    SchemeViolation(String),

    #[error("cluster containing vertex {0} cannot be linked to assigned vertices")]
    UnlinkableCluster(usize),

    #[error("fiber of terminal {0} is disconnected")]
    DisconnectedFiber(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
