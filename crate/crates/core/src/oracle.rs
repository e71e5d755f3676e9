//! Reference optima for checking the searches.
//!
//! [`oracle_optimal`] enumerates every acyclic path and is meant for small
//! graphs. [`exact_optimum`] solves the same problem in polynomial time by
//! fixing the least favorable class first and then running a Dijkstra on
//! `(edges of that class, length)`. Neither shares code with the A* searches.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, SearchGraph};
use crate::hsg::NodeId;

/// Relative tolerance used when comparing path lengths.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub path: Vec<NodeId>,
    /// Least favorable edge class on the path, 0 for the empty path.
    pub top_class: u8,
    pub count: u32,
    pub weight: f64,
    /// Number of complete start-goal paths looked at (0 for [`exact_optimum`]).
    pub enumerated: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_nodes: usize,
    pub max_paths: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_nodes: 14, max_paths: 1_000_000 }
    }
}

/// True when `a` and `b` agree within [`WEIGHT_TOLERANCE`] (relative).
pub fn weights_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= WEIGHT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Compares `(top, count, weight)` triples; weights within tolerance are equal.
pub fn compare_objective(a: (u8, u32, f64), b: (u8, u32, f64)) -> Ordering {
    (a.0, a.1).cmp(&(b.0, b.1)).then_with(
        || {
            if weights_match(a.2, b.2) {
                Ordering::Equal
            } else {
                a.2.total_cmp(&b.2)
            }
        },
    )
}

fn edge_class_of(graph: &Graph, u: NodeId, v: NodeId) -> u8 {
    graph.class(u).get().max(graph.class(v).get())
}

fn check_nodes(graph: &Graph, start: NodeId, goal: NodeId) -> Result<()> {
    for v in [start, goal] {
        if !graph.contains(v) {
            return Err(Error::UnknownNode(v));
        }
    }
    Ok(())
}

/// Exhaustive depth-first enumeration of acyclic paths.
pub fn oracle_optimal(graph: &Graph, start: NodeId, goal: NodeId, limits: OracleLimits) -> Result<OracleResult> {
    check_nodes(graph, start, goal)?;
    if graph.len() > limits.max_nodes {
        return Err(Error::InvalidArgument(format!(
            "graph has {} nodes, oracle limit is {}",
            graph.len(),
            limits.max_nodes
        )));
    }
    let k = graph.num_classes() as usize;
    let mut search = Enumeration {
        graph,
        goal,
        limits,
        visited: vec![false; graph.len()],
        counts: vec![0; k + 1],
        path: vec![start],
        best: None,
        enumerated: 0,
    };
    search.visited[start.index()] = true;
    search.descend(start, 0.0)?;
    let enumerated = search.enumerated;
    let (top_class, count, weight, path) = search.best.ok_or(Error::NoPath { layer: None })?;
    Ok(OracleResult { path, top_class, count, weight, enumerated })
}

struct Enumeration<'a> {
    graph: &'a Graph,
    goal: NodeId,
    limits: OracleLimits,
    visited: Vec<bool>,
    /// counts[c] = edges of class c on the current prefix (index 0 unused)
    counts: Vec<u32>,
    path: Vec<NodeId>,
    best: Option<(u8, u32, f64, Vec<NodeId>)>,
    enumerated: u64,
}

impl Enumeration<'_> {
    fn descend(&mut self, v: NodeId, weight: f64) -> Result<()> {
        if v == self.goal {
            self.enumerated += 1;
            if self.enumerated > self.limits.max_paths {
                return Err(Error::EnumerationCap(self.limits.max_paths));
            }
            let top = (1..self.counts.len()).rev().find(|&c| self.counts[c] > 0).unwrap_or(0);
            let candidate = (top as u8, self.counts[top], weight);
            let better = match &self.best {
                None => true,
                Some((t, c, w, _)) => compare_objective(candidate, (*t, *c, *w)) == Ordering::Less,
            };
            if better {
                self.best = Some((candidate.0, candidate.1, candidate.2, self.path.clone()));
            }
            return Ok(());
        }
        let neighbors: Vec<(NodeId, f64)> = self.graph.neighbors(v).collect();
        for (u, w) in neighbors {
            if self.visited[u.index()] {
                continue;
            }
            let c = edge_class_of(self.graph, v, u) as usize;
            self.visited[u.index()] = true;
            self.counts[c] += 1;
            self.path.push(u);
            let r = self.descend(u, weight + w);
            self.path.pop();
            self.counts[c] -= 1;
            self.visited[u.index()] = false;
            r?;
        }
        Ok(())
    }
}

/// Polynomial exact optimum of the same objective as [`oracle_optimal`].
pub fn exact_optimum(graph: &Graph, start: NodeId, goal: NodeId) -> Result<OracleResult> {
    check_nodes(graph, start, goal)?;
    if start == goal {
        return Ok(OracleResult { path: vec![start], top_class: 0, count: 0, weight: 0.0, enumerated: 0 });
    }
    let top = (1..=graph.num_classes())
        .find(|&t| reachable_within(graph, start, goal, t))
        .ok_or(Error::NoPath { layer: None })?;

    #[derive(PartialEq)]
    struct Item(u32, f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> Ordering {
            other.0.cmp(&self.0).then_with(|| other.1.total_cmp(&self.1)).then_with(|| other.2.cmp(&self.2))
        }
    }

    let n = graph.len();
    let mut best: Vec<(u32, f64)> = vec![(u32::MAX, f64::INFINITY); n];
    let mut pred: Vec<Option<NodeId>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[start.index()] = (0, 0.0);
    heap.push(Item(0, 0.0, start.index()));
    while let Some(Item(c, w, v)) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        if v == goal.index() {
            break;
        }
        let vid = NodeId::from_index(v);
        for (u, weight) in graph.neighbors(vid) {
            let class = edge_class_of(graph, vid, u);
            if class > top || done[u.index()] {
                continue;
            }
            let cand = (c + u32::from(class == top), w + weight);
            let cur = best[u.index()];
            if cand.0 < cur.0 || (cand.0 == cur.0 && cand.1 < cur.1) {
                best[u.index()] = cand;
                pred[u.index()] = Some(vid);
                heap.push(Item(cand.0, cand.1, u.index()));
            }
        }
    }
    let mut path = vec![goal];
    let mut cur = goal;
    while let Some(p) = pred[cur.index()] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    let (count, weight) = best[goal.index()];
    Ok(OracleResult { path, top_class: top, count, weight, enumerated: 0 })
}

fn reachable_within(graph: &Graph, start: NodeId, goal: NodeId, max_class: u8) -> bool {
    let mut seen = vec![false; graph.len()];
    let mut queue = VecDeque::from([start]);
    seen[start.index()] = true;
    while let Some(v) = queue.pop_front() {
        if v == goal {
            return true;
        }
        for (u, _) in graph.neighbors(v) {
            if !seen[u.index()] && edge_class_of(graph, v, u) <= max_class {
                seen[u.index()] = true;
                queue.push_back(u);
            }
        }
    }
    false
}

/// `(top class, count, weight)` of an explicit path, recomputed from edges.
pub fn path_objective(graph: &Graph, path: &[NodeId]) -> Result<(u8, u32, f64)> {
    let mut counts = vec![0u32; graph.num_classes() as usize + 1];
    let mut weight = 0.0;
    for pair in path.windows(2) {
        let w = graph
            .weight(pair[0], pair[1])
            .ok_or_else(|| Error::InvalidArgument(format!("{} and {} are not adjacent", pair[0], pair[1])))?;
        weight += w;
        counts[edge_class_of(graph, pair[0], pair[1]) as usize] += 1;
    }
    let top = (1..counts.len()).rev().find(|&c| counts[c] > 0).unwrap_or(0);
    Ok((top as u8, counts[top], weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::Class;

    fn cls(k: i64) -> Class {
        Class::new(k, 3).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(vec![[0.0; 3], [2.0, 0.0, 0.0]], vec![cls(1), cls(2)], &[(0, 1)], 3).unwrap();
        let r = oracle_optimal(&g, NodeId(0), NodeId(1), OracleLimits::default()).unwrap();
        assert_eq!(r.path, vec![NodeId(0), NodeId(1)]);
        assert_eq!((r.top_class, r.count, r.weight), (2, 1, 2.0));
        assert_eq!(r.enumerated, 1);
        let e = exact_optimum(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!(e.path, r.path);
    }

    #[test]
    fn triangle_prefers_class_over_distance() {
        // short route 0-3-1 passes the class-3 node 3, long route 0-2-1 is class 1
        let g = Graph::new(
            vec![[0.0; 3], [1.0, 0.0, 0.0], [0.5, 3.0, 0.0], [1.0, 0.0, 1e-3]],
            vec![cls(1), cls(1), cls(1), cls(3)],
            &[(0, 3), (3, 1), (0, 2), (2, 1)],
            3,
        )
        .unwrap();
        let r = oracle_optimal(&g, NodeId(0), NodeId(1), OracleLimits::default()).unwrap();
        assert_eq!(r.path, vec![NodeId(0), NodeId(2), NodeId(1)]);
        assert_eq!(r.top_class, 1);
        let e = exact_optimum(&g, NodeId(0), NodeId(1)).unwrap();
        assert_eq!((e.top_class, e.count), (r.top_class, r.count));
        assert!(weights_match(e.weight, r.weight));
    }

    #[test]
    fn trivial_and_missing_paths() {
        let g = Graph::new(vec![[0.0; 3], [1.0, 0.0, 0.0]], vec![cls(1); 2], &[], 3).unwrap();
        let r = oracle_optimal(&g, NodeId(0), NodeId(0), OracleLimits::default()).unwrap();
        assert_eq!((r.top_class, r.count, r.weight), (0, 0, 0.0));
        assert!(matches!(oracle_optimal(&g, NodeId(0), NodeId(1), OracleLimits::default()), Err(Error::NoPath { .. })));
        assert!(matches!(exact_optimum(&g, NodeId(0), NodeId(1)), Err(Error::NoPath { .. })));
    }

    #[test]
    fn limits_are_enforced() {
        // complete graph on 8 nodes has far more than 10 simple paths
        let n = 8;
        let pos = (0..n).map(|i| [i as f64, (i * i) as f64, 0.0]).collect();
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let g = Graph::new(pos, vec![cls(1); n], &edges, 3).unwrap();
        let tight = OracleLimits { max_nodes: 14, max_paths: 10 };
        assert!(matches!(oracle_optimal(&g, NodeId(0), NodeId(7), tight), Err(Error::EnumerationCap(10))));
        let small = OracleLimits { max_nodes: 4, max_paths: 10 };
        assert!(oracle_optimal(&g, NodeId(0), NodeId(7), small).is_err());
    }
}
