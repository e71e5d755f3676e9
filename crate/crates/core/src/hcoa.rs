//! Hierarchical class-ordered A*.
//!
//! Searches run top-down from layer `n - 1`. After each layer the lower
//! layers are pruned to the descendants of that layer's path, so the next
//! search only sees the part of the graph below the chosen rooms (or
//! buildings, ...). Higher-layer node classes come from a [`Classifier`].

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::class_order::{ClassVector, OrderMode, TopKey};
use crate::classifiers::Classifier;
use crate::coa::{coa_star, euclidean_to, CoaConfig, PathResult, Relaxation};
use crate::error::{Error, Result};
use crate::graph::SearchGraph;
use crate::hsg::{edge_class, Class, Hsg, NodeId, Point3};

/// Non-destructive pruned view over an [`Hsg`].
#[derive(Debug, Clone)]
pub struct PrunedHsg<'a> {
    hsg: &'a Hsg,
    filters: Vec<(usize, HashSet<NodeId>)>,
}

impl<'a> PrunedHsg<'a> {
    pub fn new(hsg: &'a Hsg) -> Self {
        PrunedHsg { hsg, filters: Vec::new() }
    }

    pub fn hsg(&self) -> &'a Hsg {
        self.hsg
    }

    /// Keeps, on every layer below `layer`, only nodes whose ancestor on
    /// `layer` lies on `path`.
    pub fn prune(&self, layer: usize, path: &[NodeId]) -> PrunedHsg<'a> {
        let mut out = self.clone();
        out.filters.push((layer, path.iter().copied().collect()));
        out
    }

    pub fn contains(&self, v: NodeId) -> bool {
        if !self.hsg.contains(v) {
            return false;
        }
        let own = self.hsg.layer(v);
        self.filters
            .iter()
            .all(|(layer, keep)| own >= *layer || self.hsg.ancestor(v, *layer).is_ok_and(|a| keep.contains(&a)))
    }

    pub fn layer(&self, layer: usize) -> LayerView<'_, 'a> {
        LayerView { view: self, layer }
    }

    /// Retained nodes of `layer`, in id order.
    pub fn retained(&self, layer: usize) -> Vec<NodeId> {
        self.hsg.layer_nodes(layer).iter().copied().filter(|&v| self.contains(v)).collect()
    }
}

/// Free function form of [`PrunedHsg::prune`].
pub fn prune<'a>(view: &PrunedHsg<'a>, layer: usize, path: &[NodeId]) -> PrunedHsg<'a> {
    view.prune(layer, path)
}

/// One layer of a [`PrunedHsg`], searchable.
#[derive(Debug, Clone, Copy)]
pub struct LayerView<'v, 'a> {
    view: &'v PrunedHsg<'a>,
    layer: usize,
}

impl SearchGraph for LayerView<'_, '_> {
    fn contains(&self, v: NodeId) -> bool {
        self.view.hsg.contains(v) && self.view.hsg.layer(v) == self.layer && self.view.contains(v)
    }

    fn position(&self, v: NodeId) -> Point3 {
        self.view.hsg.pos(v)
    }

    fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.view.hsg.neighbors(v).iter().copied().filter(|&(u, _)| self.view.contains(u))
    }
}

/// Memoized higher-layer node classes for one planning call.
pub struct Semantics<'a> {
    hsg: &'a Hsg,
    classifier: &'a dyn Classifier,
    memo: HashMap<NodeId, Class>,
    queries: usize,
}

impl<'a> Semantics<'a> {
    pub fn new(hsg: &'a Hsg, classifier: &'a dyn Classifier) -> Self {
        Semantics { hsg, classifier, memo: HashMap::new(), queries: 0 }
    }

    /// Class of `u`: stored on layer 0, predicted above.
    pub fn node_class(&mut self, u: NodeId) -> Result<Class> {
        if self.hsg.layer(u) == 0 {
            return self.hsg.class(u).ok_or_else(|| Error::MissingClass(self.hsg.name(u).into()));
        }
        if let Some(&c) = self.memo.get(&u) {
            return Ok(c);
        }
        if self.hsg.descendants(u).is_empty() {
            return Err(Error::EmptySubgraph);
        }
        self.queries += 1;
        let c = self.classifier.classify(self.hsg, u)?;
        if c.get() > self.hsg.num_classes() {
            return Err(Error::ClassOutOfRange { class: c.get() as i64, num_classes: self.hsg.num_classes() });
        }
        self.memo.insert(u, c);
        Ok(c)
    }

    /// One-hot class vector of the edge from a node of class `v_class` to `u`.
    pub fn edge_vector(&mut self, v_class: Class, u: NodeId) -> Result<ClassVector> {
        let c = edge_class(v_class, self.node_class(u)?);
        ClassVector::one_hot(c, self.hsg.num_classes())
    }

    /// Number of classifier calls made so far.
    pub fn queries(&self) -> usize {
        self.queries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HcoaConfig {
    pub mode: OrderMode,
    pub relaxation: Relaxation,
    /// On a failed layer search, fall back to a flat search over layer 0.
    pub fallback_flat: bool,
    pub record_expanded: bool,
}

impl HcoaConfig {
    fn coa(&self) -> CoaConfig {
        CoaConfig { mode: self.mode, relaxation: self.relaxation, record_expanded: self.record_expanded }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerResult {
    pub layer: usize,
    pub result: PathResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierResult {
    /// Per-layer searches from the highest searched layer down to 0.
    pub layers: Vec<LayerResult>,
    pub path: Vec<NodeId>,
    pub g: f64,
    pub theta: ClassVector,
    pub total_expanded: u64,
    pub classifier_queries: usize,
    /// Set when a layer failed and the flat fallback produced the path.
    pub fell_back: bool,
}

impl HierResult {
    pub fn key(&self) -> TopKey {
        self.theta.top_key().expect("a found path has a finite class vector")
    }

    pub fn layer_path(&self, layer: usize) -> Option<&[NodeId]> {
        self.layers.iter().find(|l| l.layer == layer).map(|l| l.result.path.as_slice())
    }
}

/// COA* on the full, unpruned layer 0 of `hsg`.
pub fn flat_coa(hsg: &Hsg, start: NodeId, goal: NodeId, config: CoaConfig) -> Result<PathResult> {
    check_endpoints(hsg, start, goal)?;
    let view = PrunedHsg::new(hsg);
    let layer = view.layer(0);
    coa_star(
        &layer,
        start,
        goal,
        euclidean_to(&layer, goal),
        |v| hsg.class(v).ok_or_else(|| Error::MissingClass(hsg.name(v).into())),
        hsg.num_classes(),
        config,
    )
}

fn check_endpoints(hsg: &Hsg, start: NodeId, goal: NodeId) -> Result<()> {
    for v in [start, goal] {
        if !hsg.contains(v) {
            return Err(Error::UnknownNode(v));
        }
        if hsg.layer(v) != 0 {
            return Err(Error::InvalidArgument(format!("{:?} is not a layer-0 node", hsg.name(v))));
        }
    }
    Ok(())
}

/// Plans from `start` to `goal` (both on layer 0) layer by layer.
pub fn hcoa_star(
    hsg: &Hsg,
    start: NodeId,
    goal: NodeId,
    classifier: &dyn Classifier,
    config: HcoaConfig,
) -> Result<HierResult> {
    check_endpoints(hsg, start, goal)?;
    let first = hsg.top_layer().saturating_sub(1);
    let mut semantics = Semantics::new(hsg, classifier);
    let mut view = PrunedHsg::new(hsg);
    let mut layers = Vec::with_capacity(first + 1);

    for layer in (0..=first).rev() {
        let s = hsg.ancestor(start, layer)?;
        let t = hsg.ancestor(goal, layer)?;
        let graph = view.layer(layer);
        let outcome = coa_star(
            &graph,
            s,
            t,
            euclidean_to(&graph, t),
            |v| semantics.node_class(v),
            hsg.num_classes(),
            config.coa(),
        );
        let result = match outcome {
            Ok(r) => r,
            Err(Error::NoPath { .. }) if config.fallback_flat => {
                log::warn!("layer {layer} search failed, falling back to a flat search");
                let flat = flat_coa(hsg, start, goal, config.coa())?;
                let total_expanded =
                    layers.iter().map(|l: &LayerResult| l.result.expanded).sum::<u64>() + flat.expanded;
                layers.push(LayerResult { layer: 0, result: flat.clone() });
                return Ok(HierResult {
                    layers,
                    path: flat.path,
                    g: flat.g,
                    theta: flat.theta,
                    total_expanded,
                    classifier_queries: semantics.queries(),
                    fell_back: true,
                });
            }
            Err(Error::NoPath { .. }) => return Err(Error::NoPath { layer: Some(layer) }),
            Err(e) => return Err(e),
        };
        if layer > 0 {
            view = view.prune(layer, &result.path);
        }
        layers.push(LayerResult { layer, result });
    }

    let last = &layers.last().expect("layer 0 is always searched").result;
    let (path, g, theta) = (last.path.clone(), last.g, last.theta.clone());
    Ok(HierResult {
        total_expanded: layers.iter().map(|l| l.result.expanded).sum(),
        layers,
        path,
        g,
        theta,
        classifier_queries: semantics.queries(),
        fell_back: false,
    })
}
