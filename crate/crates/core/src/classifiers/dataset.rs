use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coa::{coa_star, euclidean_to, CoaConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hsg::{distance, Class, Hsg, NodeId, Point3, Subgraph};

/// Random disk relabeling applied to a room before a sample is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub min_disks: usize,
    pub max_disks: usize,
    pub min_radius: f64,
    pub max_radius: f64,
    pub min_class: u8,
    /// `None` means the highest class.
    pub max_class: Option<u8>,
}

impl Default for DiskSpec {
    fn default() -> Self {
        DiskSpec { min_disks: 1, max_disks: 3, min_radius: 1.5, max_radius: 4.0, min_class: 2, max_class: None }
    }
}

impl DiskSpec {
    fn validate(&self, num_classes: u8) -> Result<(u8, u8)> {
        let hi = self.max_class.unwrap_or(num_classes);
        if self.min_disks > self.max_disks
            || !(self.min_radius >= 0.0 && self.min_radius <= self.max_radius && self.max_radius.is_finite())
            || self.min_class < 1
            || self.min_class > hi
            || hi > num_classes
        {
            return Err(Error::InvalidArgument(format!("bad disk spec {self:?}")));
        }
        Ok((self.min_class, hi))
    }
}

/// Raises every node within `radius` of `center` to at least `class`.
pub fn apply_disk(positions: &[Point3], classes: &mut [Class], center: Point3, radius: f64, class: Class) {
    for (p, c) in positions.iter().zip(classes.iter_mut()) {
        if distance(*p, center) <= radius {
            *c = (*c).max(class);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSample {
    pub room: String,
    pub seed: u64,
    pub label: Class,
    #[serde(flatten)]
    pub subgraph: Subgraph,
}

/// Dataset-JSON document. Edges index into the sample's `nodes` array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub num_classes: u8,
    pub samples: Vec<DatasetSample>,
}

impl Dataset {
    pub fn from_json(text: &str) -> Result<Self> {
        let ds: Dataset = serde_json::from_str(text)?;
        for s in &ds.samples {
            let n = s.subgraph.nodes.len();
            for c in s.subgraph.nodes.iter().map(|n| n.class).chain([s.label]) {
                if c.get() == 0 || c.get() > ds.num_classes {
                    return Err(Error::ClassOutOfRange { class: c.get() as i64, num_classes: ds.num_classes });
                }
            }
            if let Some(&(u, v)) = s.subgraph.edges.iter().find(|(u, v)| *u >= n || *v >= n) {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range in {}", s.room)));
            }
        }
        Ok(ds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dataset serializes")
    }

    pub fn labels(&self) -> Vec<Class> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// First `ceil(len * fraction)` samples and the rest.
    pub fn split(&self, fraction: f64) -> (Dataset, Dataset) {
        let cut = ((self.samples.len() as f64) * fraction).ceil() as usize;
        let cut = cut.min(self.samples.len());
        let part = |s: &[DatasetSample]| Dataset { num_classes: self.num_classes, samples: s.to_vec() };
        (part(&self.samples[..cut]), part(&self.samples[cut..]))
    }
}

/// Draws `per_room` samples from every node on `layer`.
///
/// Each sample relabels the room with random disks, then runs a class-ordered
/// search between two distinct random border nodes inside the room. The label
/// is the highest class on the resulting path. Rooms with fewer than two
/// border nodes are skipped, as are draws whose endpoints are not connected
/// inside the room.
pub fn generate_dataset(hsg: &Hsg, layer: usize, per_room: usize, disks: &DiskSpec, seed: u64) -> Result<Dataset> {
    if layer == 0 || layer > hsg.top_layer() {
        return Err(Error::InvalidArgument(format!("dataset layer must be in 1..={}", hsg.top_layer())));
    }
    let k = hsg.num_classes();
    let (class_lo, class_hi) = disks.validate(k)?;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    for &room in hsg.layer_nodes(layer) {
        let base = hsg.semantic_subgraph(room)?;
        let borders: Vec<usize> = (0..base.len()).filter(|&i| base.nodes[i].border).collect();
        if borders.len() < 2 {
            log::warn!("skipping {}: {} border node(s)", hsg.name(room), borders.len());
            continue;
        }
        let positions: Vec<Point3> = base.nodes.iter().map(|n| n.pos).collect();
        for _ in 0..per_room {
            let sample_seed: u64 = master.gen();
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
            let mut classes: Vec<Class> = base.nodes.iter().map(|n| n.class).collect();
            for _ in 0..rng.gen_range(disks.min_disks..=disks.max_disks) {
                let center = positions[rng.gen_range(0..positions.len())];
                let radius = rng.gen_range(disks.min_radius..=disks.max_radius);
                let class = Class::new(rng.gen_range(class_lo..=class_hi) as i64, k)?;
                apply_disk(&positions, &mut classes, center, radius, class);
            }
            let si = rng.gen_range(0..borders.len());
            let mut ti = rng.gen_range(0..borders.len() - 1);
            if ti >= si {
                ti += 1;
            }
            let (s, t) = (borders[si], borders[ti]);
            let mut sub = base.clone();
            for (n, c) in sub.nodes.iter_mut().zip(&classes) {
                n.class = *c;
            }
            let graph = Graph::from_subgraph(&sub, k)?;
            let (s, t) = (NodeId::from_index(s), NodeId::from_index(t));
            let found =
                coa_star(&graph, s, t, euclidean_to(&graph, t), |v| Ok(graph.class(v)), k, CoaConfig::default());
            let path = match found {
                Ok(r) => r.path,
                Err(Error::NoPath { .. }) => {
                    log::debug!("{}: border nodes not connected inside the room", hsg.name(room));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let label = path.iter().map(|&v| classes[v.index()]).max().expect("path is non-empty");
            samples.push(DatasetSample { room: hsg.name(room).to_string(), seed: sample_seed, label, subgraph: sub });
        }
    }
    Ok(Dataset { num_classes: k, samples })
}
