//! Higher-layer node classification.
//!
//! A room (or any node above layer 0) gets a class predicted from the
//! places below it. Ground truth for training comes from the most
//! unfavorable class an optimal path through the room actually touches.

mod dataset;
mod knn;
mod mc;
mod table;

pub use dataset::{apply_disk, generate_dataset, Dataset, DatasetSample, DiskSpec};
pub use knn::{knn_features, FeatureVector, KnnClassifier};
pub use mc::{mc_classify, MajorityClass};
pub use table::{PredictionDocument, TableClassifier};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hsg::{Class, Hsg, NodeId, Subgraph};

/// Predicts the class of a node above layer 0.
pub trait Classifier {
    fn classify(&self, hsg: &Hsg, node: NodeId) -> Result<Class>;
}

/// Classifiers that only need the induced subgraph, not the node identity.
pub trait SubgraphClassifier {
    fn classify_subgraph(&self, sub: &Subgraph, num_classes: u8) -> Result<Class>;
}

/// How plurality votes with equal counts are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Toward the smaller, more favorable class.
    #[default]
    Favorable,
    /// Toward the larger, less favorable class.
    Conservative,
}

/// Class with the highest count; `counts[i]` counts class `i + 1`.
pub(crate) fn plurality(counts: &[usize], tie_break: TieBreak) -> Class {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        let wins = match tie_break {
            TieBreak::Favorable => c > counts[best],
            TieBreak::Conservative => c >= counts[best],
        };
        if wins {
            best = i;
        }
    }
    Class::new(best as i64 + 1, counts.len() as u8).expect("index within class range")
}

/// Least favorable layer-0 class among the path nodes lying under `p`.
pub fn label_from_path(hsg: &Hsg, path: &[NodeId], p: NodeId) -> Result<Class> {
    let layer = hsg.layer(p);
    let mut best: Option<Class> = None;
    for &u in path {
        if hsg.layer(u) != 0 || hsg.ancestor(u, layer)? != p {
            continue;
        }
        let c = hsg.class(u).ok_or_else(|| Error::MissingClass(hsg.name(u).into()))?;
        best = Some(best.map_or(c, |b| b.max(c)));
    }
    best.ok_or(Error::EmptyIntersection)
}

/// Fraction of predictions equal to their labels.
pub fn accuracy(predictions: &[Class], labels: &[Class]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch(predictions.len(), labels.len()));
    }
    if predictions.is_empty() {
        return Err(Error::InvalidArgument("accuracy of zero samples".into()));
    }
    let hits = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(hits as f64 / predictions.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::{EdgeDocument, HsgDocument, NodeDocument};

    fn c(k: i64) -> Class {
        Class::new(k, 3).unwrap()
    }

    #[test]
    fn plurality_ties() {
        assert_eq!(plurality(&[5, 2, 1], TieBreak::Favorable), c(1));
        assert_eq!(plurality(&[3, 0, 3], TieBreak::Favorable), c(1));
        assert_eq!(plurality(&[3, 0, 3], TieBreak::Conservative), c(3));
        assert_eq!(plurality(&[0, 1, 0], TieBreak::Favorable), c(2));
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[c(1), c(2)], &[c(1), c(2)]).unwrap(), 1.0);
        assert_eq!(accuracy(&[c(1), c(1)], &[c(2), c(3)]).unwrap(), 0.0);
        let a = accuracy(&[c(1), c(2), c(3)], &[c(1), c(2), c(1)]).unwrap();
        assert!((a - 2.0 / 3.0).abs() < 1e-15);
        assert!(accuracy(&[c(1)], &[]).is_err());
        assert!(accuracy(&[], &[]).is_err());
    }

    #[test]
    fn label_from_path_examples() {
        let nd = |id: &str, layer, x: f64, parent: Option<&str>, class| NodeDocument {
            id: id.into(),
            layer,
            pos: vec![x, 0.0],
            parent: parent.map(Into::into),
            class,
        };
        let doc = HsgDocument {
            num_layers: 2,
            num_classes: 3,
            nodes: vec![
                nd("P", 1, 1.0, None, None),
                nd("Q", 1, 5.0, None, None),
                nd("a", 0, 0.0, Some("P"), Some(1)),
                nd("b", 0, 1.0, Some("P"), Some(1)),
                nd("c", 0, 2.0, Some("P"), Some(3)),
                nd("d", 0, 5.0, Some("Q"), Some(2)),
            ],
            edges: ["P-Q", "a-b", "b-c", "c-d"]
                .iter()
                .map(|e| {
                    let (u, v) = e.split_once('-').unwrap();
                    EdgeDocument { u: u.into(), v: v.into() }
                })
                .collect(),
        };
        let g = Hsg::from_document(&doc).unwrap();
        let id = |n| g.lookup(n).unwrap();
        let p = id("P");
        assert_eq!(label_from_path(&g, &[id("a"), id("b")], p).unwrap(), c(1));
        assert_eq!(label_from_path(&g, &[id("a"), id("b"), id("c"), id("d")], p).unwrap(), c(3));
        assert!(matches!(label_from_path(&g, &[id("d")], p), Err(Error::EmptyIntersection)));
    }
}
