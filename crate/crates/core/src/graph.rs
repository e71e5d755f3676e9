//! Single-layer graphs as seen by the searches.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hsg::{distance, Class, Hsg, NodeId, Point3, Subgraph};

/// Undirected weighted graph a search can walk.
pub trait SearchGraph {
    fn contains(&self, v: NodeId) -> bool;

    fn position(&self, v: NodeId) -> Point3;

    /// Neighbors of `v` inside the graph, with edge weights.
    fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_;
}

/// Standalone single-layer semantic graph with node classes.
#[derive(Debug, Clone)]
pub struct Graph {
    positions: Vec<Point3>,
    classes: Vec<Class>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    edges: Vec<(NodeId, NodeId)>,
    num_classes: u8,
}

impl Graph {
    pub fn new(positions: Vec<Point3>, classes: Vec<Class>, edges: &[(usize, usize)], num_classes: u8) -> Result<Self> {
        if positions.len() != classes.len() {
            return Err(Error::InvalidGraph(format!("{} positions but {} classes", positions.len(), classes.len())));
        }
        if let Some(c) = classes.iter().find(|c| c.get() > num_classes) {
            return Err(Error::ClassOutOfRange { class: c.get() as i64, num_classes });
        }
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut kept = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on {u}")));
            }
            let w = distance(positions[u], positions[v]);
            adjacency[u].push((NodeId::from_index(v), w));
            adjacency[v].push((NodeId::from_index(u), w));
            kept.push((NodeId::from_index(u), NodeId::from_index(v)));
        }
        Ok(Graph { positions, classes, adjacency, edges: kept, num_classes })
    }

    pub fn from_subgraph(sub: &Subgraph, num_classes: u8) -> Result<Self> {
        Graph::new(
            sub.nodes.iter().map(|n| n.pos).collect(),
            sub.nodes.iter().map(|n| n.class).collect(),
            &sub.edges,
            num_classes,
        )
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn num_classes(&self) -> u8 {
        self.num_classes
    }

    pub fn class(&self, v: NodeId) -> Class {
        self.classes[v.index()]
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.len()).map(NodeId::from_index)
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.adjacency[u.index()].iter().find(|(x, _)| *x == v).map(|&(_, w)| w)
    }
}

/// One full layer of an [`Hsg`] copied into a [`Graph`], with id maps.
///
/// Higher layers have no stored classes; they are given class 1 here and
/// callers supply real classes through their own class function.
#[derive(Debug, Clone)]
pub struct LayerGraph {
    pub graph: Graph,
    pub to_hsg: Vec<NodeId>,
    pub from_hsg: HashMap<NodeId, NodeId>,
}

impl LayerGraph {
    pub fn new(hsg: &Hsg, layer: usize) -> Result<Self> {
        if layer >= hsg.num_layers() {
            return Err(Error::InvalidArgument(format!("layer {layer} does not exist")));
        }
        let to_hsg = hsg.layer_nodes(layer).to_vec();
        let from_hsg: HashMap<NodeId, NodeId> =
            to_hsg.iter().enumerate().map(|(i, &v)| (v, NodeId::from_index(i))).collect();
        let mut edges = Vec::new();
        for (i, &v) in to_hsg.iter().enumerate() {
            for &(u, _) in hsg.neighbors(v) {
                let j = from_hsg[&u].index();
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        let graph = Graph::new(
            to_hsg.iter().map(|&v| hsg.pos(v)).collect(),
            to_hsg.iter().map(|&v| hsg.class(v).unwrap_or(Class::BEST)).collect(),
            &edges,
            hsg.num_classes(),
        )?;
        Ok(LayerGraph { graph, to_hsg, from_hsg })
    }

    pub fn local(&self, v: NodeId) -> Result<NodeId> {
        self.from_hsg.get(&v).copied().ok_or(Error::UnknownNode(v))
    }

    pub fn global(&self, v: NodeId) -> NodeId {
        self.to_hsg[v.index()]
    }
}

impl SearchGraph for Graph {
    fn contains(&self, v: NodeId) -> bool {
        v.index() < self.positions.len()
    }

    fn position(&self, v: NodeId) -> Point3 {
        self.positions[v.index()]
    }

    fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.adjacency[v.index()].iter().copied()
    }
}

impl<G: SearchGraph> SearchGraph for &G {
    fn contains(&self, v: NodeId) -> bool {
        (**self).contains(v)
    }

    fn position(&self, v: NodeId) -> Point3 {
        (**self).position(v)
    }

    fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        (**self).neighbors(v)
    }
}
