use thiserror::Error;

use crate::graph::NodeId;

/// Errors produced by graph construction, the cut-tree builders and the
/// file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) has zero capacity")]
    ZeroCapacity(NodeId, NodeId),
    #[error("node {0} appears in more than one contraction group")]
    OverlappingGroups(NodeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph must be simple with unit capacities")]
    NotSimple,
    #[error("source and sink are the same node {0}")]
    SameEndpoints(NodeId),
    #[error("node set must not be empty")]
    EmptySet,
    #[error("cut side must be a proper non-empty subset")]
    TrivialCut,
    #[error("pivot {0} is contained in the terminal set")]
    PivotInTerminals(NodeId),
    #[error("super-node {id} does not exist (tree has {count})")]
    InvalidSuperNode { id: usize, count: usize },
    #[error("invalid partition tree: {0}")]
    InvalidPartitionTree(String),
    #[error("subtree for super-node {0} does not match its auxiliary graph")]
    SubtreeMismatch(usize),
    #[error("tree does not span the graph: {0}")]
    NonSpanningTree(String),
    #[error("node {0} is not done and estimates are not trusted")]
    UndoneNode(NodeId),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("oracle disagreement on pair ({u}, {v}): tree says {tree}, flow says {flow}")]
    OracleDisagreement { u: NodeId, v: NodeId, tree: u64, flow: u64 },
    #[error("fixture generation failed after {0} attempts")]
    FixtureRetriesExhausted(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
