//! A* with class-inflated edge costs, `w + alpha^class`.
//!
//! This is the weighted-sum baseline. It needs `alpha` tuned to the graph
//! scale: small values let short paths through bad classes win, very large
//! values drown the geometric length in floating-point rounding.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::class_order::ClassVector;
use crate::coa::PathResult;
use crate::error::{Error, Result};
use crate::graph::SearchGraph;
use crate::hsg::{edge_class, Class, NodeId};

struct Entry {
    f: f64,
    seq: u64,
    node: NodeId,
    cost: f64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.f.total_cmp(&self.f).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Plain A* over `edge_cost(v, u, w)`. Returns the path and expansion counts.
pub(crate) fn astar<G, H, E>(
    graph: &G,
    start: NodeId,
    goal: NodeId,
    heuristic: H,
    mut edge_cost: E,
) -> Result<(Vec<NodeId>, u64, u64)>
where
    G: SearchGraph,
    H: Fn(NodeId) -> f64,
    E: FnMut(NodeId, NodeId, f64) -> Result<f64>,
{
    for v in [start, goal] {
        if !graph.contains(v) {
            return Err(Error::UnknownNode(v));
        }
    }
    let mut cost: HashMap<NodeId, f64> = HashMap::from([(start, 0.0)]);
    let mut pred: HashMap<NodeId, NodeId> = HashMap::new();
    let mut heap = BinaryHeap::from([Entry { f: heuristic(start), seq: 0, node: start, cost: 0.0 }]);
    let (mut seq, mut expanded) = (1u64, 0u64);
    while let Some(Entry { node: v, cost: c, .. }) = heap.pop() {
        if c > cost[&v] {
            continue;
        }
        expanded += 1;
        if v == goal {
            let mut path = vec![goal];
            let mut cur = goal;
            while let Some(&p) = pred.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Ok((path, expanded, seq));
        }
        for (u, w) in graph.neighbors(v) {
            let next = c + edge_cost(v, u, w)?;
            if cost.get(&u).is_none_or(|&old| next < old) {
                cost.insert(u, next);
                pred.insert(u, v);
                heap.push(Entry { f: next + heuristic(u), seq, node: u, cost: next });
                seq += 1;
            }
        }
    }
    Err(Error::NoPath { layer: None })
}

/// Runs A* on `w + alpha^class(e)` with a Euclidean heuristic.
///
/// The returned [`PathResult::g`] is the geometric length of the path, and
/// `theta` counts its edges per class, so results compare directly against
/// the class-ordered searches.
pub fn ma_star<G, H, C>(
    graph: &G,
    start: NodeId,
    goal: NodeId,
    alpha: f64,
    heuristic: H,
    mut node_class: C,
    num_classes: u8,
) -> Result<PathResult>
where
    G: SearchGraph,
    H: Fn(NodeId) -> f64,
    C: FnMut(NodeId) -> Result<Class>,
{
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let penalties: Vec<f64> = (1..=num_classes as i32).map(|k| alpha.powi(k)).collect();
    if penalties.iter().any(|p| !p.is_finite()) {
        return Err(Error::CostOverflow(alpha));
    }
    let mut classes: HashMap<NodeId, Class> = HashMap::new();
    let mut class_of = |v: NodeId| -> Result<Class> {
        if let Some(&c) = classes.get(&v) {
            return Ok(c);
        }
        let c = node_class(v)?;
        if c.get() > num_classes {
            return Err(Error::ClassOutOfRange { class: c.get() as i64, num_classes });
        }
        classes.insert(v, c);
        Ok(c)
    };
    let (path, expanded, pushes) = astar(graph, start, goal, heuristic, |v, u, w| {
        let c = edge_class(class_of(v)?, class_of(u)?);
        Ok(w + penalties[c.slot()])
    })?;

    let mut theta = ClassVector::zero(num_classes);
    let mut g = 0.0;
    for pair in path.windows(2) {
        let w = graph
            .neighbors(pair[0])
            .find(|(u, _)| *u == pair[1])
            .map(|(_, w)| w)
            .expect("consecutive path nodes are adjacent");
        g += w;
        theta.bump(edge_class(class_of(pair[0])?, class_of(pair[1])?));
    }
    Ok(PathResult { path, g, theta, expanded, pushes, expanded_nodes: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coa::euclidean_to;
    use crate::graph::Graph;

    fn cls(k: i64) -> Class {
        Class::new(k, 3).unwrap()
    }

    /// Short route through a class-3 node versus a 6 m class-1 detour.
    fn detour() -> Graph {
        Graph::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 2.0, 0.0]],
            vec![cls(1), cls(3), cls(1), cls(1)],
            &[(0, 1), (1, 2), (0, 3), (3, 2)],
            3,
        )
        .unwrap()
    }

    fn run(g: &Graph, alpha: f64) -> Result<PathResult> {
        ma_star(g, NodeId(0), NodeId(2), alpha, euclidean_to(g, NodeId(2)), |v| Ok(g.class(v)), 3)
    }

    #[test]
    fn small_alpha_cuts_through_bad_class() {
        // 2 + 2*1.1^3 < 2*sqrt(5) + 2*1.1
        let r = run(&detour(), 1.1).unwrap();
        assert_eq!(r.path, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert_eq!(r.key().class, 3);
        assert_eq!(r.g, 2.0);
    }

    #[test]
    fn large_alpha_avoids_bad_class() {
        let r = run(&detour(), 10.0).unwrap();
        assert_eq!(r.path, vec![NodeId(0), NodeId(3), NodeId(2)]);
        assert_eq!(r.theta, ClassVector::from_counts(&[2, 0, 0]));
    }

    #[test]
    fn rejects_bad_alpha() {
        let g = detour();
        assert!(matches!(run(&g, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(run(&g, f64::NAN), Err(Error::InvalidArgument(_))));
        assert!(matches!(run(&g, 1e200), Err(Error::CostOverflow(_))));
    }
}
