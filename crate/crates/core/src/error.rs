use thiserror::Error;

use crate::tree::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid witness tree: {0}")]
    InvalidWitness(String),
    #[error("objective undefined: the tree has no Steiner nodes")]
    NoSteinerNodes,
    #[error("objective undefined: total edge cost is zero")]
    ZeroTotalCost,
    #[error("edges_cross called with identical edges {0}-{1}")]
    IdenticalEdges(NodeId, NodeId),
    #[error("witness tree is not laminar: edges {0:?} and {1:?} cross")]
    NotLaminar((NodeId, NodeId), (NodeId, NodeId)),
    #[error("marking mismatch: {0}")]
    MarkingMismatch(String),
    #[error("laminarize did not terminate within {0} moves")]
    NonTermination(usize),
    #[error("not a CA-Node-Steiner instance: Steiner node {node} has {terminals} terminal neighbours")]
    CaViolation { node: NodeId, terminals: usize },
    #[error("node {0} is not a final node")]
    NotFinal(NodeId),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("not Steiner-claw-free: Steiner node {0} has three or more Steiner neighbours")]
    NotClawFree(NodeId),
    #[error("star offset {sigma} out of range for t = {t}, q = {q}")]
    InvalidSigma { sigma: usize, t: usize, q: usize },
    #[error("q = {0} is below 5; use the small-q construction")]
    QTooSmall(usize),
    #[error("invalid sections: {0}")]
    InvalidSections(String),
    #[error("marking space of {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("{0} terminals is too many for exhaustive enumeration (max 8)")]
    TooManyTerminals(usize),
    #[error("witness tree is not decomposable into sections: {0}")]
    MalformedSections(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("host mismatch: {0}")]
    HostMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, WitnessError>;
