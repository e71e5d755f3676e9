//! Layered semantic graph model.
//!
//! Layer 0 holds the metric places with their semantic classes; every node
//! below the top layer has exactly one parent one layer up. Edge weights are
//! never stored: they are always the Euclidean distance between endpoints.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a node inside an [`Hsg`] or a standalone [`crate::graph::Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Semantic class in `1..=K`. Smaller is more favorable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Class(u8);

impl Class {
    pub const BEST: Class = Class(1);

    /// Builds a class, checking it against the number of classes `k`.
    pub fn new(class: i64, num_classes: u8) -> Result<Self> {
        if class < 1 || class > num_classes as i64 {
            return Err(Error::ClassOutOfRange { class, num_classes });
        }
        Ok(Class(class as u8))
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    /// Zero-based slot in a class-count vector.
    #[inline]
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Point3 = [f64; 3];

pub fn distance(a: Point3, b: Point3) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Class of an edge: the less favorable of its endpoints.
#[inline]
pub fn edge_class(a: Class, b: Class) -> Class {
    a.max(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub name: String,
    pub layer: usize,
    pub pos: Point3,
    pub parent: Option<NodeId>,
    pub class: Option<Class>,
}

/// HSG-JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HsgDocument {
    pub num_layers: usize,
    pub num_classes: u8,
    pub nodes: Vec<NodeDocument>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub id: String,
    pub layer: usize,
    pub pos: Vec<f64>,
    pub parent: Option<String>,
    pub class: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub u: String,
    pub v: String,
}

/// Layer-0 nodes below a higher-layer node, with the edges between them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InducedSubgraph {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Self-contained copy of an induced subgraph with classes and border flags.
/// This is what classifiers consume and what the dataset serializes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subgraph {
    pub nodes: Vec<SubgraphNode>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphNode {
    pub id: String,
    pub pos: Point3,
    pub class: Class,
    pub border: bool,
}

impl Subgraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn border_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.border).count()
    }
}

/// Hierarchical semantic graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct Hsg {
    num_layers: usize,
    num_classes: u8,
    nodes: Vec<Node>,
    adjacency: Vec<Vec<(NodeId, f64)>>,
    layers: Vec<Vec<NodeId>>,
    descendants: Vec<Vec<NodeId>>,
    edge_count: usize,
    by_name: HashMap<String, NodeId>,
}

impl Hsg {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HsgDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &HsgDocument) -> Result<Self> {
        if doc.num_layers == 0 {
            return Err(Error::InvalidGraph("num_layers must be at least 1".into()));
        }
        if doc.num_classes == 0 {
            return Err(Error::InvalidGraph("num_classes must be at least 1".into()));
        }
        let top = doc.num_layers - 1;

        let mut by_name = HashMap::with_capacity(doc.nodes.len());
        for (i, n) in doc.nodes.iter().enumerate() {
            if by_name.insert(n.id.clone(), NodeId::from_index(i)).is_some() {
                return Err(Error::DuplicateNode(n.id.clone()));
            }
        }

        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut layers = vec![Vec::new(); doc.num_layers];
        for (i, n) in doc.nodes.iter().enumerate() {
            if n.layer > top {
                return Err(Error::InvalidGraph(format!(
                    "node {:?} has layer {} but the graph has {} layers",
                    n.id, n.layer, doc.num_layers
                )));
            }
            let pos = match n.pos.as_slice() {
                [x, y] => [*x, *y, 0.0],
                [x, y, z] => [*x, *y, *z],
                _ => return Err(Error::InvalidGraph(format!("node {:?} position must have 2 or 3 coordinates", n.id))),
            };
            if pos.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidGraph(format!("node {:?} has a non-finite position", n.id)));
            }
            let class = match n.class {
                Some(c) => Some(Class::new(c, doc.num_classes)?),
                None if n.layer == 0 => return Err(Error::MissingClass(n.id.clone())),
                None => None,
            };
            let parent = match &n.parent {
                Some(p) => Some(*by_name.get(p).ok_or_else(|| Error::DanglingReference(p.clone()))?),
                None => None,
            };
            nodes.push(Node { name: n.id.clone(), layer: n.layer, pos, parent, class });
            layers[n.layer].push(NodeId::from_index(i));
        }

        for n in &nodes {
            match n.parent {
                Some(p) => {
                    if n.layer == top {
                        return Err(Error::InvalidGraph(format!("top-layer node {:?} must not have a parent", n.name)));
                    }
                    if nodes[p.index()].layer != n.layer + 1 {
                        return Err(Error::InvalidGraph(format!(
                            "parent of {:?} must be on layer {}",
                            n.name,
                            n.layer + 1
                        )));
                    }
                }
                None if n.layer < top => {
                    return Err(Error::InvalidGraph(format!("node {:?} has no parent", n.name)));
                }
                None => {}
            }
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut seen = BTreeSet::new();
        for e in &doc.edges {
            let u = *by_name.get(&e.u).ok_or_else(|| Error::DanglingReference(e.u.clone()))?;
            let v = *by_name.get(&e.v).ok_or_else(|| Error::DanglingReference(e.v.clone()))?;
            if nodes[u.index()].layer != nodes[v.index()].layer {
                return Err(Error::CrossLayerEdge { u: e.u.clone(), v: e.v.clone() });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on {:?}", e.u)));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                continue;
            }
            let w = distance(nodes[u.index()].pos, nodes[v.index()].pos);
            adjacency[u.index()].push((v, w));
            adjacency[v.index()].push((u, w));
        }

        for (layer, members) in layers.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidGraph(format!("layer {layer} has no nodes")));
            }
            if !layer_connected(members, &adjacency) {
                return Err(Error::DisconnectedLayer { layer });
            }
        }

        let mut descendants = vec![Vec::new(); nodes.len()];
        for &v in &layers[0] {
            let mut cur = nodes[v.index()].parent;
            while let Some(p) = cur {
                descendants[p.index()].push(v);
                cur = nodes[p.index()].parent;
            }
        }

        Ok(Hsg {
            num_layers: doc.num_layers,
            num_classes: doc.num_classes,
            nodes,
            adjacency,
            layers,
            descendants,
            edge_count: seen.len(),
            by_name,
        })
    }

    pub fn to_document(&self) -> HsgDocument {
        let nodes = self
            .nodes
            .iter()
            .map(|n| NodeDocument {
                id: n.name.clone(),
                layer: n.layer,
                pos: n.pos.to_vec(),
                parent: n.parent.map(|p| self.nodes[p.index()].name.clone()),
                class: n.class.map(|c| c.get() as i64),
            })
            .collect();
        let mut edges = Vec::with_capacity(self.edge_count);
        for (i, adj) in self.adjacency.iter().enumerate() {
            for &(j, _) in adj {
                if i < j.index() {
                    edges.push(EdgeDocument { u: self.nodes[i].name.clone(), v: self.nodes[j.index()].name.clone() });
                }
            }
        }
        HsgDocument { num_layers: self.num_layers, num_classes: self.num_classes, nodes, edges }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    /// Number of layers, `n + 1`.
    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    /// Index of the top (root) layer, `n`.
    pub fn top_layer(&self) -> usize {
        self.num_layers - 1
    }

    pub fn num_classes(&self) -> u8 {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn node(&self, v: NodeId) -> &Node {
        &self.nodes[v.index()]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn layer_nodes(&self, layer: usize) -> &[NodeId] {
        &self.layers[layer]
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[v.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.nodes[v.index()].name
    }

    pub fn layer(&self, v: NodeId) -> usize {
        self.nodes[v.index()].layer
    }

    pub fn pos(&self, v: NodeId) -> Point3 {
        self.nodes[v.index()].pos
    }

    /// Stored class; always present on layer 0.
    pub fn class(&self, v: NodeId) -> Option<Class> {
        self.nodes[v.index()].class
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.nodes.len()
    }

    /// Projection of `v` onto `layer` by following parent links.
    pub fn ancestor(&self, v: NodeId, layer: usize) -> Result<NodeId> {
        if !self.contains(v) {
            return Err(Error::UnknownNode(v));
        }
        let own = self.layer(v);
        if layer < own || layer >= self.num_layers {
            return Err(Error::LayerBelowNode { node: v, requested: layer });
        }
        let mut cur = v;
        for _ in own..layer {
            cur = self.nodes[cur.index()].parent.ok_or(Error::BrokenParentChain(cur))?;
        }
        Ok(cur)
    }

    /// Layer-0 descendants of a higher-layer node, in id order.
    pub fn descendants(&self, p: NodeId) -> &[NodeId] {
        &self.descendants[p.index()]
    }

    pub fn induced_subgraph(&self, p: NodeId) -> Result<InducedSubgraph> {
        if !self.contains(p) {
            return Err(Error::UnknownNode(p));
        }
        let layer = self.layer(p);
        if layer == 0 {
            return Err(Error::InvalidArgument(format!("induced subgraph of layer-0 node {:?}", self.name(p))));
        }
        let nodes = self.descendants[p.index()].clone();
        let mut edges = Vec::new();
        for &u in &nodes {
            for &(v, _) in &self.adjacency[u.index()] {
                if u < v && self.ancestor(v, layer)? == p {
                    edges.push((u, v));
                }
            }
        }
        Ok(InducedSubgraph { nodes, edges })
    }

    /// Layer-0 nodes under `p` with a neighbor whose ancestor at `layer`
    /// is not `p`.
    pub fn border_nodes(&self, p: NodeId, layer: usize) -> Result<BTreeSet<NodeId>> {
        if !self.contains(p) {
            return Err(Error::UnknownNode(p));
        }
        if layer == 0 || self.layer(p) != layer {
            return Err(Error::InvalidArgument(format!("border nodes need a node on layer {layer} >= 1")));
        }
        let mut out = BTreeSet::new();
        for &u in &self.descendants[p.index()] {
            for &(v, _) in &self.adjacency[u.index()] {
                if self.ancestor(v, layer)? != p {
                    out.insert(u);
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Induced subgraph of `p` copied out with classes and border flags.
    pub fn semantic_subgraph(&self, p: NodeId) -> Result<Subgraph> {
        let induced = self.induced_subgraph(p)?;
        let borders = self.border_nodes(p, self.layer(p))?;
        let local: HashMap<NodeId, usize> = induced.nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let nodes = induced
            .nodes
            .iter()
            .map(|&v| SubgraphNode {
                id: self.name(v).to_string(),
                pos: self.pos(v),
                class: self.class(v).expect("layer-0 nodes carry a class"),
                border: borders.contains(&v),
            })
            .collect();
        let edges = induced.edges.iter().map(|(u, v)| (local[u], local[v])).collect();
        Ok(Subgraph { nodes, edges })
    }

    /// Copy with layer-0 classes replaced by `relabel(node, current)`.
    pub fn relabeled(&self, mut relabel: impl FnMut(NodeId, Class) -> Class) -> Hsg {
        let mut out = self.clone();
        for &v in &self.layers[0] {
            let node = &mut out.nodes[v.index()];
            let current = node.class.expect("layer-0 nodes carry a class");
            node.class = Some(relabel(v, current));
        }
        out
    }
}

fn layer_connected(members: &[NodeId], adjacency: &[Vec<(NodeId, f64)>]) -> bool {
    let mut seen = HashMap::with_capacity(members.len());
    let mut queue = VecDeque::new();
    seen.insert(members[0], ());
    queue.push_back(members[0]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adjacency[u.index()] {
            if seen.insert(v, ()).is_none() {
                queue.push_back(v);
            }
        }
    }
    seen.len() == members.len()
}
