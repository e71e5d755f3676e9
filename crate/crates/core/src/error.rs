use thiserror::Error;

use crate::hsg::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),

    #[error("dangling reference to unknown node {0:?}")]
    DanglingReference(String),

    #[error("missing layer-0 class on node {0:?}")]
    MissingClass(String),

    #[error("class {class} out of range 1..={num_classes}")]
    ClassOutOfRange { class: i64, num_classes: u8 },

    #[error("layer {layer} is disconnected")]
    DisconnectedLayer { layer: usize },

    #[error("edge {u:?}-{v:?} crosses layers")]
    CrossLayerEdge { u: String, v: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("class vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("layer {requested} is below the layer of node {node:?}")]
    LayerBelowNode { node: NodeId, requested: usize },

    #[error("broken parent chain at node {0:?}")]
    BrokenParentChain(NodeId),

    #[error("node {0:?} is not in the search graph")]
    UnknownNode(NodeId),

    #[error("no path found{}", match layer { Some(l) => format!(" at layer {l}"), None => String::new() })]
    NoPath { layer: Option<usize> },

    #[error("empty subgraph")]
    EmptySubgraph,

    #[error("subgraph has no border nodes")]
    NoBorderNodes,

    #[error("no prediction for node {0:?}")]
    NoPrediction(String),

    #[error("classifier failure: {0}")]
    Classifier(String),

    #[error("path does not intersect the subgraph")]
    EmptyIntersection,

    #[error("need at least {needed} samples, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },

    #[error("path enumeration cap of {0} exceeded")]
    EnumerationCap(u64),

    #[error("edge cost overflow for alpha {0}")]
    CostOverflow(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
