//! Synthetic graphs: grid worlds, hierarchical room layouts, random small
//! graphs, and disk relabeling.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifiers::apply_disk;
use crate::error::{Error, Result};
use crate::graph::{Graph, SearchGraph};
use crate::hsg::{distance, Class, EdgeDocument, Hsg, HsgDocument, NodeDocument, NodeId, Point3};
use crate::oracle::{compare_objective, exact_optimum};

/// Grid of `class_map.len()` rows, 4-connected, under a single layer-1 root.
/// Cell `(r, c)` is named `c{r}_{c}` and sits at `(c * spacing, r * spacing)`.
pub fn gen_grid_world(class_map: &[Vec<i64>], spacing: f64, num_classes: u8) -> Result<Hsg> {
    let rows = class_map.len();
    let cols = class_map.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || class_map.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument("grid needs a non-empty rectangular class map".into()));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad spacing {spacing}")));
    }
    let name = |r: usize, c: usize| format!("c{r}_{c}");
    let mut nodes = vec![NodeDocument {
        id: "root".into(),
        layer: 1,
        pos: vec![(cols - 1) as f64 * spacing / 2.0, (rows - 1) as f64 * spacing / 2.0],
        parent: None,
        class: None,
    }];
    let mut edges = Vec::new();
    for (r, row) in class_map.iter().enumerate() {
        for (c, &k) in row.iter().enumerate() {
            Class::new(k, num_classes)?;
            nodes.push(NodeDocument {
                id: name(r, c),
                layer: 0,
                pos: vec![c as f64 * spacing, r as f64 * spacing],
                parent: Some("root".into()),
                class: Some(k),
            });
            if c + 1 < cols {
                edges.push(EdgeDocument { u: name(r, c), v: name(r, c + 1) });
            }
            if r + 1 < rows {
                edges.push(EdgeDocument { u: name(r, c), v: name(r + 1, c) });
            }
        }
    }
    Hsg::from_document(&HsgDocument { num_layers: 2, num_classes, nodes, edges })
}

pub const ROAD: i64 = 1;
pub const GRASS: i64 = 2;
pub const RIVER: i64 = 3;

/// Road, grass and river cells. The river runs down column 3 with a single
/// road bridge in row 2; the straight line from the top-left to the
/// bottom-right corner crosses grass and river.
pub fn road_grass_river_map() -> Vec<Vec<i64>> {
    const R: i64 = ROAD;
    const G: i64 = GRASS;
    const W: i64 = RIVER;
    vec![vec![R, R, G, W, G], vec![G, G, G, W, G], vec![G, R, R, R, R], vec![G, R, G, W, G], vec![G, G, G, W, R]]
}

/// The road/grass/river grid with its start and goal cells.
pub fn road_grass_river() -> (Hsg, &'static str, &'static str) {
    let hsg = gen_grid_world(&road_grass_river_map(), 1.0, 3).expect("fixture is valid");
    (hsg, "c0_0", "c4_4")
}

/// Parameters for [`gen_hier_hsg`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HierParams {
    pub rooms: usize,
    pub nodes_per_room: usize,
    /// Doorway edges per adjacent room pair (fewer if a room is too small).
    pub doorways: usize,
    /// 2, or 3 for a building layer above the rooms. The hierarchical
    /// search never plans on the top layer, so rooms are only searched
    /// when there is a building layer.
    pub layers: usize,
    pub num_classes: u8,
    /// Side of the square cell each room occupies, in meters.
    pub room_size: f64,
    /// Chance of keeping each non-tree room adjacency (ignored with `tree_rooms`).
    pub extra_adjacency: f64,
    /// Tree-shaped room adjacency and fully connected rooms.
    pub tree_rooms: bool,
}

impl Default for HierParams {
    fn default() -> Self {
        HierParams {
            rooms: 12,
            nodes_per_room: 25,
            doorways: 2,
            layers: 3,
            num_classes: 3,
            room_size: 10.0,
            extra_adjacency: 0.3,
            tree_rooms: false,
        }
    }
}

const TREE_ROOM_ATTEMPTS: u64 = 64;

/// Random rooms on a square lattice.
///
/// Each room holds a connected cluster of layer-0 places; adjacent rooms are
/// joined by doorway edges, and a room-layer edge exists exactly when a
/// doorway does. Room and building nodes sit at the centroid of their
/// places. With `tree_rooms`, the room adjacency is a tree and every room is a
/// clique, and each emitted graph has passed [`verify_tree_rooms`].
pub fn gen_hier_hsg(params: &HierParams, seed: u64) -> Result<Hsg> {
    let p = params;
    if p.rooms == 0 || p.nodes_per_room == 0 || p.doorways == 0 || p.num_classes == 0 {
        return Err(Error::InvalidArgument("room, node, doorway and class counts must be at least 1".into()));
    }
    if !(2..=3).contains(&p.layers) {
        return Err(Error::InvalidArgument(format!("layers must be 2 or 3, got {}", p.layers)));
    }
    if !(p.room_size > 1.0 && p.room_size.is_finite()) || !(0.0..=1.0).contains(&p.extra_adjacency) {
        return Err(Error::InvalidArgument("bad room size or adjacency probability".into()));
    }
    if !p.tree_rooms {
        return build_hier(p, &mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..TREE_ROOM_ATTEMPTS {
        let hsg = build_hier(p, &mut rng)?;
        if verify_tree_rooms(&hsg)? {
            return Ok(hsg);
        }
        log::debug!("tree-room attempt {attempt} failed verification");
    }
    Err(Error::InvalidArgument(format!("no verified tree-room layout within {TREE_ROOM_ATTEMPTS} attempts")))
}

fn build_hier(p: &HierParams, rng: &mut ChaCha8Rng) -> Result<Hsg> {
    let cols = (p.rooms as f64).sqrt().ceil() as usize;
    let cell = |r: usize| (r % cols, r / cols);
    let building_of = |r: usize| cell(r).0 / 2;

    let mut adjacent = Vec::new();
    for a in 0..p.rooms {
        for b in a + 1..p.rooms {
            let ((ax, ay), (bx, by)) = (cell(a), cell(b));
            if ax.abs_diff(bx) + ay.abs_diff(by) == 1 {
                adjacent.push((a, b));
            }
        }
    }
    // Spanning tree inside each building first, so every building's rooms
    // stay connected on their own.
    adjacent.shuffle(rng);
    adjacent.sort_by_key(|&(a, b)| building_of(a) != building_of(b));
    let mut dsu: Vec<usize> = (0..p.rooms).collect();
    fn find(dsu: &mut [usize], mut x: usize) -> usize {
        while dsu[x] != x {
            dsu[x] = dsu[dsu[x]];
            x = dsu[x];
        }
        x
    }
    let mut room_edges = BTreeSet::new();
    let mut spare = Vec::new();
    for &(a, b) in &adjacent {
        let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
        if ra != rb {
            dsu[ra] = rb;
            room_edges.insert((a, b));
        } else {
            spare.push((a, b));
        }
    }
    if !p.tree_rooms {
        for e in spare {
            if rng.gen_bool(p.extra_adjacency) {
                room_edges.insert(e);
            }
        }
    }

    let k = p.num_classes as i64;
    let margin = (p.room_size * 0.05).min(0.5);
    let mut places: Vec<Vec<(Point3, i64)>> = Vec::with_capacity(p.rooms);
    for r in 0..p.rooms {
        let (cx, cy) = cell(r);
        let (x0, y0) = (cx as f64 * p.room_size, cy as f64 * p.room_size);
        let dominant = if k == 1 || rng.gen_bool(0.55) { 1 } else { rng.gen_range(2..=k) };
        let mut room = Vec::with_capacity(p.nodes_per_room);
        for _ in 0..p.nodes_per_room {
            let x = rng.gen_range(x0 + margin..x0 + p.room_size - margin);
            let y = rng.gen_range(y0 + margin..y0 + p.room_size - margin);
            let class = if rng.gen_bool(0.75) { dominant } else { rng.gen_range(1..=k) };
            room.push(([x, y, 0.0], class));
        }
        places.push(room);
    }

    let place_name = |r: usize, i: usize| format!("p{}", r * p.nodes_per_room + i);
    let mut edges = Vec::new();
    for (r, room) in places.iter().enumerate() {
        for (a, b) in room_cluster_edges(room, p.tree_rooms) {
            edges.push(EdgeDocument { u: place_name(r, a), v: place_name(r, b) });
        }
    }
    for &(a, b) in &room_edges {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, pa) in places[a].iter().enumerate() {
            for (j, pb) in places[b].iter().enumerate() {
                pairs.push((distance(pa.0, pb.0), i, j));
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        let (mut used_a, mut used_b) = (BTreeSet::new(), BTreeSet::new());
        let mut placed = 0;
        for (_, i, j) in pairs {
            if placed == p.doorways {
                break;
            }
            if !used_a.contains(&i) && !used_b.contains(&j) {
                used_a.insert(i);
                used_b.insert(j);
                edges.push(EdgeDocument { u: place_name(a, i), v: place_name(b, j) });
                placed += 1;
            }
        }
    }

    let centroid = |pts: &mut dyn Iterator<Item = Point3>| {
        let (mut s, mut n) = ([0.0; 3], 0.0);
        for q in pts {
            for d in 0..3 {
                s[d] += q[d];
            }
            n += 1.0;
        }
        vec![s[0] / n, s[1] / n]
    };
    let buildings = if p.layers == 3 { (0..p.rooms).map(building_of).max().unwrap_or(0) + 1 } else { 0 };
    let mut nodes = Vec::new();
    for b in 0..buildings {
        let mut pts = (0..p.rooms).filter(|&r| building_of(r) == b).flat_map(|r| places[r].iter().map(|q| q.0));
        nodes.push(NodeDocument { id: format!("B{b}"), layer: 2, pos: centroid(&mut pts), parent: None, class: None });
    }
    for (r, room) in places.iter().enumerate() {
        nodes.push(NodeDocument {
            id: format!("R{r}"),
            layer: 1,
            pos: centroid(&mut room.iter().map(|q| q.0)),
            parent: (p.layers == 3).then(|| format!("B{}", building_of(r))),
            class: None,
        });
    }
    for (r, room) in places.iter().enumerate() {
        for (i, &(pos, class)) in room.iter().enumerate() {
            nodes.push(NodeDocument {
                id: place_name(r, i),
                layer: 0,
                pos: vec![pos[0], pos[1]],
                parent: Some(format!("R{r}")),
                class: Some(class),
            });
        }
    }
    let mut building_edges = BTreeSet::new();
    for &(a, b) in &room_edges {
        edges.push(EdgeDocument { u: format!("R{a}"), v: format!("R{b}") });
        let (ba, bb) = (building_of(a), building_of(b));
        if p.layers == 3 && ba != bb {
            building_edges.insert((ba.min(bb), ba.max(bb)));
        }
    }
    for (a, b) in building_edges {
        edges.push(EdgeDocument { u: format!("B{a}"), v: format!("B{b}") });
    }
    Hsg::from_document(&HsgDocument { num_layers: p.layers, num_classes: p.num_classes, nodes, edges })
}

/// Edges inside one room: a clique, or links to the three nearest places
/// plus whatever joins the remaining components.
fn room_cluster_edges(room: &[(Point3, i64)], clique: bool) -> Vec<(usize, usize)> {
    let n = room.len();
    let mut out = BTreeSet::new();
    if clique {
        for a in 0..n {
            for b in a + 1..n {
                out.insert((a, b));
            }
        }
        return out.into_iter().collect();
    }
    for a in 0..n {
        let mut near: Vec<usize> = (0..n).filter(|&b| b != a).collect();
        near.sort_by(|&x, &y| distance(room[a].0, room[x].0).total_cmp(&distance(room[a].0, room[y].0)));
        for &b in near.iter().take(3) {
            out.insert((a.min(b), a.max(b)));
        }
    }
    // join components through their closest pair
    loop {
        let comp = components(n, &out);
        if comp.iter().all(|&c| c == comp[0]) {
            break;
        }
        let mut best = (f64::INFINITY, 0, 0);
        for a in (0..n).filter(|&a| comp[a] == comp[0]) {
            for b in (0..n).filter(|&b| comp[b] != comp[0]) {
                let d = distance(room[a].0, room[b].0);
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        out.insert((best.1.min(best.2), best.1.max(best.2)));
    }
    out.into_iter().collect()
}

fn components(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = s;
                    stack.push(v);
                }
            }
        }
    }
    comp
}

/// Layer-0 graph of the whole HSG with node ids preserved.
pub fn ground_graph(hsg: &Hsg) -> Result<Graph> {
    let layer0 = hsg.layer_nodes(0);
    debug_assert!(layer0.iter().enumerate().all(|(i, v)| v.index() >= i));
    let mut local = vec![usize::MAX; hsg.len()];
    for (i, &v) in layer0.iter().enumerate() {
        local[v.index()] = i;
    }
    let mut edges = Vec::new();
    for &u in layer0 {
        for &(v, _) in hsg.neighbors(u) {
            if u < v {
                edges.push((local[u.index()], local[v.index()]));
            }
        }
    }
    Graph::new(
        layer0.iter().map(|&v| hsg.pos(v)).collect(),
        layer0.iter().map(|&v| hsg.class(v).expect("layer-0 nodes carry a class")).collect(),
        &edges,
        hsg.num_classes(),
    )
}

/// Checks the two conditions under which the hierarchical search is optimal:
/// every layer above 0 is a tree, and for every pair of places in the same
/// room, the best path inside the room is as good as the best path in the
/// whole layer-0 graph.
pub fn verify_tree_rooms(hsg: &Hsg) -> Result<bool> {
    for layer in 1..hsg.num_layers() {
        let n = hsg.layer_nodes(layer).len();
        let m: usize = hsg.layer_nodes(layer).iter().map(|&v| hsg.neighbors(v).len()).sum::<usize>() / 2;
        if m + 1 != n {
            return Ok(false);
        }
    }
    let full = ground_graph(hsg)?;
    let layer0 = hsg.layer_nodes(0);
    let mut local = vec![usize::MAX; hsg.len()];
    for (i, &v) in layer0.iter().enumerate() {
        local[v.index()] = i;
    }
    for &room in hsg.layer_nodes(1) {
        let sub = hsg.semantic_subgraph(room)?;
        let inside = Graph::from_subgraph(&sub, hsg.num_classes())?;
        let members = hsg.descendants(room);
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                let (la, lb) = (NodeId::from_index(a), NodeId::from_index(b));
                let Ok(room_best) = exact_optimum(&inside, la, lb) else { return Ok(false) };
                let whole = exact_optimum(
                    &full,
                    NodeId::from_index(local[members[a].index()]),
                    NodeId::from_index(local[members[b].index()]),
                )?;
                let objective = |r: &crate::oracle::OracleResult| (r.top_class, r.count, r.weight);
                if compare_objective(objective(&room_best), objective(&whole)).is_gt() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Raises layer-0 nodes within `radius` of any center to at least `class`.
pub fn disk_labeling(hsg: &Hsg, centers: &[Point3], radius: f64, class: i64) -> Result<Hsg> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let class = Class::new(class, hsg.num_classes())?;
    Ok(hsg.relabeled(|v, current| {
        let mut c = [current];
        for &center in centers {
            apply_disk(&[hsg.pos(v)], &mut c, center, radius, class);
        }
        c[0]
    }))
}

/// Connected graph with `nodes` points in a 10 m square, a random spanning
/// tree plus extra random edges up to `edges` in total, and uniform classes.
pub fn random_connected_graph(nodes: usize, edges: usize, num_classes: u8, rng: &mut impl Rng) -> Result<Graph> {
    if nodes == 0 || num_classes == 0 {
        return Err(Error::InvalidArgument("need at least one node and one class".into()));
    }
    let max_edges = nodes * (nodes - 1) / 2;
    if edges + 1 < nodes || edges > max_edges {
        return Err(Error::InvalidArgument(format!("{edges} edges cannot connect {nodes} nodes simply")));
    }
    let positions: Vec<Point3> =
        (0..nodes).map(|_| [rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0), 0.0]).collect();
    let classes = (0..nodes)
        .map(|_| Class::new(rng.gen_range(1..=num_classes as i64), num_classes))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(rng);
    let mut set = BTreeSet::new();
    for i in 1..nodes {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        set.insert((a.min(b), a.max(b)));
    }
    let mut rest: Vec<(usize, usize)> =
        (0..nodes).flat_map(|a| (a + 1..nodes).map(move |b| (a, b))).filter(|e| !set.contains(e)).collect();
    rest.shuffle(rng);
    set.extend(rest.into_iter().take(edges - (nodes - 1)));
    let list: Vec<(usize, usize)> = set.into_iter().collect();
    Graph::new(positions, classes, &list, num_classes)
}

/// Wraps a flat graph as a two-layer HSG with one root above every node.
/// Node `i` is named `n{i}`.
pub fn single_room_hsg(graph: &Graph) -> Result<Hsg> {
    let mut nodes = vec![NodeDocument { id: "root".into(), layer: 1, pos: vec![0.0, 0.0], parent: None, class: None }];
    for v in graph.node_ids() {
        let p = graph.position(v);
        nodes.push(NodeDocument {
            id: format!("n{}", v.index()),
            layer: 0,
            pos: p.to_vec(),
            parent: Some("root".into()),
            class: Some(graph.class(v).get() as i64),
        });
    }
    let edges = graph
        .edges()
        .iter()
        .map(|(u, v)| EdgeDocument { u: format!("n{}", u.index()), v: format!("n{}", v.index()) })
        .collect();
    Hsg::from_document(&HsgDocument { num_layers: 2, num_classes: graph.num_classes(), nodes, edges })
}

/// Two distinct layer-0 nodes drawn uniformly (the same node if there is
/// only one).
pub fn random_endpoints(hsg: &Hsg, rng: &mut impl Rng) -> (NodeId, NodeId) {
    let layer0 = hsg.layer_nodes(0);
    let s = rng.gen_range(0..layer0.len());
    if layer0.len() == 1 {
        return (layer0[0], layer0[0]);
    }
    let mut t = rng.gen_range(0..layer0.len() - 1);
    if t >= s {
        t += 1;
    }
    (layer0[s], layer0[t])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        let g = gen_grid_world(&[vec![1]], 1.0, 3).unwrap();
        assert_eq!(g.layer_nodes(0).len(), 1);
        assert_eq!(g.edge_count(), 0);
        let g = gen_grid_world(&vec![vec![1; 3]; 3], 2.0, 3).unwrap();
        assert_eq!(g.layer_nodes(0).len(), 9);
        assert_eq!(g.edge_count(), 12);
        assert!(matches!(gen_grid_world(&[vec![4]], 1.0, 3), Err(Error::ClassOutOfRange { .. })));
        assert!(gen_grid_world(&[], 1.0, 3).is_err());
    }

    #[test]
    fn hier_basic_shape() {
        let p = HierParams { rooms: 5, nodes_per_room: 6, ..Default::default() };
        let g = gen_hier_hsg(&p, 3).unwrap();
        assert_eq!(g.layer_nodes(0).len(), 30);
        assert_eq!(g.layer_nodes(1).len(), 5);
        for &r in g.layer_nodes(1) {
            assert_eq!(g.descendants(r).len(), 6);
        }
    }

    #[test]
    fn hier_room_edge_iff_doorway() {
        for seed in 0..20 {
            let p = HierParams { rooms: 7, nodes_per_room: 5, layers: 3, ..Default::default() };
            let g = gen_hier_hsg(&p, seed).unwrap();
            let mut doorways = BTreeSet::new();
            for &u in g.layer_nodes(0) {
                for &(v, _) in g.neighbors(u) {
                    let (a, b) = (g.ancestor(u, 1).unwrap(), g.ancestor(v, 1).unwrap());
                    if a != b {
                        doorways.insert((a.min(b), a.max(b)));
                    }
                }
            }
            let mut room_edges = BTreeSet::new();
            for &r in g.layer_nodes(1) {
                for &(s, _) in g.neighbors(r) {
                    room_edges.insert((r.min(s), r.max(s)));
                }
            }
            assert_eq!(doorways, room_edges, "seed {seed}");
        }
    }

    #[test]
    fn hier_is_seed_deterministic() {
        let p = HierParams { rooms: 6, nodes_per_room: 8, ..Default::default() };
        assert_eq!(gen_hier_hsg(&p, 9).unwrap().to_json(), gen_hier_hsg(&p, 9).unwrap().to_json());
        assert_ne!(gen_hier_hsg(&p, 9).unwrap().to_json(), gen_hier_hsg(&p, 10).unwrap().to_json());
    }

    #[test]
    fn tree_room_instances_verify() {
        let p = HierParams { rooms: 6, nodes_per_room: 5, tree_rooms: true, ..Default::default() };
        for seed in 0..5 {
            let g = gen_hier_hsg(&p, seed).unwrap();
            assert!(verify_tree_rooms(&g).unwrap());
            let tree_edges: usize = g.layer_nodes(1).iter().map(|&r| g.neighbors(r).len()).sum::<usize>() / 2;
            assert_eq!(tree_edges, 5);
        }
    }

    #[test]
    fn single_room() {
        let p = HierParams { rooms: 1, nodes_per_room: 4, ..Default::default() };
        let g = gen_hier_hsg(&p, 0).unwrap();
        assert_eq!(g.layer_nodes(1).len(), 1);
    }

    #[test]
    fn rejects_bad_params() {
        for p in [
            HierParams { rooms: 0, ..Default::default() },
            HierParams { layers: 4, ..Default::default() },
            HierParams { doorways: 0, ..Default::default() },
        ] {
            assert!(gen_hier_hsg(&p, 0).is_err());
        }
    }

    #[test]
    fn disk_labeling_examples() {
        let g = gen_grid_world(&[vec![1, 2, 1, 1]], 1.0, 3).unwrap();
        let same = disk_labeling(&g, &[], 3.0, 3).unwrap();
        assert_eq!(same.to_json(), g.to_json());
        let all = disk_labeling(&g, &[[0.0, 0.0, 0.0]], 100.0, 2).unwrap();
        for &v in all.layer_nodes(0) {
            assert_eq!(all.class(v).unwrap().get(), 2);
        }
        let some = disk_labeling(&g, &[[0.0, 0.0, 0.0], [3.0, 0.0, 0.0]], 0.5, 3).unwrap();
        let classes: Vec<u8> = some.layer_nodes(0).iter().map(|&v| some.class(v).unwrap().get()).collect();
        assert_eq!(classes, vec![3, 2, 1, 3]);
        assert!(disk_labeling(&g, &[], 0.0, 3).is_err());
        assert!(disk_labeling(&g, &[], 1.0, 4).is_err());
    }

    #[test]
    fn random_graph_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = random_connected_graph(12, 22, 3, &mut rng).unwrap();
            assert_eq!(g.len(), 12);
            assert_eq!(g.edges().len(), 22);
        }
        assert!(random_connected_graph(5, 3, 3, &mut rng).is_err());
    }
}
