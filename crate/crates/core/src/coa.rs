//! Class-ordered A* on a single layer.
//!
//! Paths are ranked first by their class vector under an [`OrderMode`],
//! then by length. Every pop of a live label counts as one expansion.
//!
//! Under [`OrderMode::TopClass`] a single label per node is not enough:
//! two prefixes with keys `(1, 5)` at 100 m and `(1, 6)` at 1 m become
//! tied once a class-3 edge follows, and then only the shorter one is
//! optimal. [`Relaxation::Pareto`] therefore keeps, per node, every label
//! not dominated in both the top key and the cost-to-come. Under
//! [`OrderMode::FullLex`] the order is strictly monotone and the Pareto
//! set never holds more than one label, which is the plain relaxation rule.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::class_order::{compare_counts, top_key_of, ClassVector, OrderMode, TopKey};
use crate::error::{Error, Result};
use crate::graph::SearchGraph;
use crate::hsg::{distance, edge_class, Class, NodeId};

/// Label update policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relaxation {
    /// Keep all labels not dominated for every possible continuation. Exact.
    #[default]
    Pareto,
    /// One label per node, replaced when the new class vector is strictly
    /// better or equal with a shorter distance. Exact only for `FullLex`.
    SingleLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoaConfig {
    pub mode: OrderMode,
    pub relaxation: Relaxation,
    /// Keep the list of expanded nodes in [`PathResult::expanded_nodes`].
    pub record_expanded: bool,
}

impl CoaConfig {
    pub fn with_mode(mode: OrderMode) -> Self {
        CoaConfig { mode, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub path: Vec<NodeId>,
    /// Total weight in meters.
    pub g: f64,
    pub theta: ClassVector,
    pub expanded: u64,
    pub pushes: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub expanded_nodes: Vec<NodeId>,
}

impl PathResult {
    pub fn key(&self) -> TopKey {
        self.theta.top_key().expect("a found path has a finite class vector")
    }
}

/// Straight-line distance to `goal`; admissible because weights are Euclidean.
pub fn euclidean_to<G: SearchGraph>(graph: &G, goal: NodeId) -> impl Fn(NodeId) -> f64 + '_ {
    let target = graph.contains(goal).then(|| graph.position(goal));
    move |v| target.map_or(0.0, |t| distance(graph.position(v), t))
}

struct Label {
    node: NodeId,
    pred: Option<usize>,
    g: f64,
    theta: SmallVec<[u32; 4]>,
    key: TopKey,
    alive: bool,
}

struct QueueEntry {
    rank: SmallVec<[u32; 5]>,
    f: f64,
    seq: u64,
    label: usize,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.rank.cmp(&self.rank).then_with(|| other.f.total_cmp(&self.f)).then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rank_of(theta: &[u32], key: TopKey, mode: OrderMode) -> SmallVec<[u32; 5]> {
    match mode {
        OrderMode::TopClass => SmallVec::from_slice(&[key.class as u32, key.count]),
        OrderMode::FullLex => theta.iter().rev().copied().collect(),
    }
}

/// Whether label `a` (theta, key, g) is at least as good as `b` after any
/// common continuation.
fn dominates(a: (&[u32], TopKey, f64), b: (&[u32], TopKey, f64), mode: OrderMode) -> bool {
    match mode {
        OrderMode::TopClass => a.1 <= b.1 && a.2 <= b.2,
        OrderMode::FullLex => match compare_counts(a.0, b.0, mode) {
            Ordering::Less => true,
            Ordering::Equal => a.2 <= b.2,
            Ordering::Greater => false,
        },
    }
}

/// Runs class-ordered A* from `start` to `goal`.
///
/// `node_class` is evaluated at most once per node; `heuristic` must be
/// admissible and non-negative.
pub fn coa_star<G, H, C>(
    graph: &G,
    start: NodeId,
    goal: NodeId,
    heuristic: H,
    mut node_class: C,
    num_classes: u8,
    config: CoaConfig,
) -> Result<PathResult>
where
    G: SearchGraph,
    H: Fn(NodeId) -> f64,
    C: FnMut(NodeId) -> Result<Class>,
{
    for v in [start, goal] {
        if !graph.contains(v) {
            return Err(Error::UnknownNode(v));
        }
    }
    let mode = config.mode;
    let mut classes: HashMap<NodeId, Class> = HashMap::new();
    let mut class_of = |v: NodeId, classes: &mut HashMap<NodeId, Class>| -> Result<Class> {
        match classes.entry(v) {
            Entry::Occupied(e) => Ok(*e.get()),
            Entry::Vacant(e) => {
                let c = node_class(v)?;
                if c.get() > num_classes {
                    return Err(Error::ClassOutOfRange { class: c.get() as i64, num_classes });
                }
                Ok(*e.insert(c))
            }
        }
    };

    let mut labels: Vec<Label> = Vec::new();
    let mut at_node: HashMap<NodeId, SmallVec<[usize; 2]>> = HashMap::new();
    let mut queue = BinaryHeap::new();
    let mut seq = 0u64;
    let mut expanded = 0u64;
    let mut expanded_nodes = Vec::new();

    let zero: SmallVec<[u32; 4]> = SmallVec::from_elem(0, num_classes as usize);
    let zero_key = top_key_of(&zero);
    queue.push(QueueEntry { rank: rank_of(&zero, zero_key, mode), f: heuristic(start), seq, label: 0 });
    labels.push(Label { node: start, pred: None, g: 0.0, theta: zero, key: zero_key, alive: true });
    at_node.entry(start).or_default().push(0);
    seq += 1;

    while let Some(entry) = queue.pop() {
        let current = entry.label;
        if !labels[current].alive {
            continue;
        }
        expanded += 1;
        let v = labels[current].node;
        if config.record_expanded {
            expanded_nodes.push(v);
        }
        if v == goal {
            let label = &labels[current];
            let (g, theta) = (label.g, ClassVector::Finite(label.theta.clone()));
            let mut path = Vec::new();
            let mut cursor = Some(current);
            while let Some(i) = cursor {
                path.push(labels[i].node);
                cursor = labels[i].pred;
            }
            path.reverse();
            return Ok(PathResult { path, g, theta, expanded, pushes: seq, expanded_nodes });
        }

        let v_class = class_of(v, &mut classes)?;
        for (u, w) in graph.neighbors(v) {
            let u_class = class_of(u, &mut classes)?;
            let edge = edge_class(v_class, u_class);
            let mut theta = labels[current].theta.clone();
            theta[edge.slot()] += 1;
            let key = top_key_of(&theta);
            let g = labels[current].g + w;

            let slot = at_node.entry(u).or_default();
            let accept = match config.relaxation {
                Relaxation::Pareto => {
                    let dominated = slot.iter().any(|&i| {
                        let l = &labels[i];
                        dominates((&l.theta, l.key, l.g), (&theta, key, g), mode)
                    });
                    if !dominated {
                        slot.retain(|&mut i| {
                            let l = &mut labels[i];
                            if dominates((&theta, key, g), (&l.theta, l.key, l.g), mode) {
                                l.alive = false;
                                false
                            } else {
                                true
                            }
                        });
                    }
                    !dominated
                }
                Relaxation::SingleLabel => match slot.first().copied() {
                    None => true,
                    Some(i) => {
                        let l = &labels[i];
                        let better = match compare_counts(&theta, &l.theta, mode) {
                            Ordering::Less => true,
                            Ordering::Equal => g < l.g,
                            Ordering::Greater => false,
                        };
                        if better {
                            labels[i].alive = false;
                            slot.clear();
                        }
                        better
                    }
                },
            };
            if !accept {
                continue;
            }
            let id = labels.len();
            slot.push(id);
            queue.push(QueueEntry { rank: rank_of(&theta, key, mode), f: g + heuristic(u), seq, label: id });
            labels.push(Label { node: u, pred: Some(current), g, theta, key, alive: true });
            seq += 1;
        }
    }
    Err(Error::NoPath { layer: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cls(k: i64) -> Class {
        Class::new(k, 3).unwrap()
    }

    fn run(g: &Graph, s: usize, t: usize, mode: OrderMode, relaxation: Relaxation) -> Result<PathResult> {
        coa_star(
            g,
            NodeId::from_index(s),
            NodeId::from_index(t),
            euclidean_to(g, NodeId::from_index(t)),
            |v| Ok(g.class(v)),
            g.num_classes(),
            CoaConfig { mode, relaxation, record_expanded: false },
        )
    }

    fn ids(p: &[NodeId]) -> Vec<usize> {
        p.iter().map(|v| v.index()).collect()
    }

    #[test]
    fn start_equals_goal() {
        let g = Graph::new(vec![[0.0; 3]], vec![cls(2)], &[], 3).unwrap();
        let r = run(&g, 0, 0, OrderMode::TopClass, Relaxation::Pareto).unwrap();
        assert_eq!(ids(&r.path), vec![0]);
        assert_eq!(r.g, 0.0);
        assert_eq!(r.theta, ClassVector::zero(3));
        assert_eq!(r.expanded, 1);
    }

    #[test]
    fn line_graph() {
        let g =
            Graph::new(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]], vec![cls(1); 3], &[(0, 1), (1, 2)], 3)
                .unwrap();
        let r = run(&g, 0, 2, OrderMode::TopClass, Relaxation::Pareto).unwrap();
        assert_eq!(ids(&r.path), vec![0, 1, 2]);
        assert_eq!(r.g, 2.0);
        assert_eq!(r.theta, ClassVector::from_counts(&[2, 0, 0]));
        assert!(r.expanded >= 1);
    }

    /// a(0) -> b(1, class 3) -> d(3) is short; a -> c(2) -> d is 10 m of class 1.
    fn diamond() -> Graph {
        Graph::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 5.0, 0.0], [2.0, 0.0, 0.0]],
            vec![cls(1), cls(3), cls(1), cls(1)],
            &[(0, 1), (1, 3), (0, 2), (2, 3)],
            3,
        )
        .unwrap()
    }

    #[test]
    fn diamond_prefers_class_one_route() {
        let g = diamond();
        let r = run(&g, 0, 3, OrderMode::TopClass, Relaxation::Pareto).unwrap();
        assert_eq!(ids(&r.path), vec![0, 2, 3]);
        assert_eq!(r.key(), TopKey { class: 1, count: 2 });
        let expected = 5.0 + (4.0f64 + 25.0).sqrt();
        assert!((r.g - expected).abs() < 1e-12);
    }

    #[test]
    fn no_path_between_components() {
        let g = Graph::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], vec![cls(1); 2], &[], 3).unwrap();
        assert!(matches!(run(&g, 0, 1, OrderMode::TopClass, Relaxation::Pareto), Err(Error::NoPath { .. })));
        assert!(matches!(run(&g, 0, 7, OrderMode::TopClass, Relaxation::Pareto), Err(Error::UnknownNode(_))));
    }

    /// x is reached by a long 1-hop route and a short 2-hop route, both
    /// class 1; the only way on to the goal crosses a class-3 node.
    fn tie_trap() -> Graph {
        // s=0, far=1, a=2, x=3, r=4 (class 3), goal=5
        Graph::new(
            vec![
                [0.0, 0.0, 0.0],
                [5.0, 8.0, 0.0],
                [5.0, 0.5, 0.0],
                [10.0, 0.0, 0.0],
                [11.0, 0.0, 0.0],
                [12.0, 0.0, 0.0],
            ],
            vec![cls(1), cls(1), cls(1), cls(1), cls(3), cls(1)],
            &[(0, 1), (1, 3), (0, 2), (2, 3), (3, 4), (4, 5)],
            3,
        )
        .unwrap()
    }

    #[test]
    fn pareto_labels_fix_top_class_ties() {
        // x is reached by s-far-x (2 edges, ~20.6 m) and s-a-b-x (3 edges,
        // ~10 m), all class 1; the way on to the goal crosses class 3.
        let g3 = Graph::new(
            vec![
                [0.0, 0.0, 0.0],  // s
                [5.0, 9.0, 0.0],  // far
                [3.0, 0.2, 0.0],  // a
                [10.0, 0.0, 0.0], // x
                [11.0, 0.0, 0.0], // r (class 3)
                [12.0, 0.0, 0.0], // goal
                [6.5, 0.2, 0.0],  // b
            ],
            vec![cls(1), cls(1), cls(1), cls(1), cls(3), cls(1), cls(1)],
            &[(0, 1), (1, 3), (0, 2), (2, 6), (6, 3), (3, 4), (4, 5)],
            3,
        )
        .unwrap();
        let exact = run(&g3, 0, 5, OrderMode::TopClass, Relaxation::Pareto).unwrap();
        let single = run(&g3, 0, 5, OrderMode::TopClass, Relaxation::SingleLabel).unwrap();
        // optimum: straight route through a and b
        assert_eq!(ids(&exact.path), vec![0, 2, 6, 3, 4, 5]);
        assert_eq!(exact.key(), TopKey { class: 3, count: 2 });
        // the single-label rule keeps the 2-edge prefix via far at x
        assert_eq!(ids(&single.path), vec![0, 1, 3, 4, 5]);
        assert_eq!(single.key(), exact.key());
        assert!(single.g > exact.g + 1.0);
    }

    #[test]
    fn single_label_is_exact_for_full_lex() {
        let g = tie_trap();
        let a = run(&g, 0, 5, OrderMode::FullLex, Relaxation::Pareto).unwrap();
        let b = run(&g, 0, 5, OrderMode::FullLex, Relaxation::SingleLabel).unwrap();
        assert_eq!(a.path, b.path);
        assert_eq!(a.theta, b.theta);
    }

    #[test]
    fn node_class_evaluated_once_per_node() {
        let g = diamond();
        let mut calls = HashMap::new();
        coa_star(
            &g,
            NodeId(0),
            NodeId(3),
            |_| 0.0,
            |v| {
                *calls.entry(v).or_insert(0) += 1;
                Ok(g.class(v))
            },
            3,
            CoaConfig::default(),
        )
        .unwrap();
        assert!(calls.values().all(|&c| c == 1));
    }

    #[test]
    fn class_errors_propagate() {
        let g = diamond();
        let err = coa_star(
            &g,
            NodeId(0),
            NodeId(3),
            |_| 0.0,
            |_| Err(Error::Classifier("boom".into())),
            3,
            CoaConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Classifier(_)));
    }
}
