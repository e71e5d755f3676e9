use serde::{Deserialize, Serialize};

use super::{plurality, Classifier, DatasetSample, SubgraphClassifier, TieBreak};
use crate::error::{Error, Result};
use crate::hsg::{Class, Hsg, NodeId, Subgraph};

/// Class proportions plus the majority class among border nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub proportions: Vec<f64>,
    pub border_majority: Class,
}

impl FeatureVector {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.proportions.clone();
        v.push(self.border_majority.get() as f64);
        v
    }
}

pub fn knn_features(sub: &Subgraph, num_classes: u8, tie_break: TieBreak) -> Result<FeatureVector> {
    if sub.is_empty() {
        return Err(Error::EmptySubgraph);
    }
    let k = num_classes as usize;
    let mut all = vec![0usize; k];
    let mut border = vec![0usize; k];
    for n in &sub.nodes {
        all[n.class.slot()] += 1;
        if n.border {
            border[n.class.slot()] += 1;
        }
    }
    if border.iter().all(|&c| c == 0) {
        return Err(Error::NoBorderNodes);
    }
    let total = sub.len() as f64;
    Ok(FeatureVector {
        proportions: all.iter().map(|&c| c as f64 / total).collect(),
        border_majority: plurality(&border, tie_break),
    })
}

/// k-nearest-neighbor vote over standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnClassifier {
    pub k: usize,
    pub num_classes: u8,
    pub tie_break: TieBreak,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Features with zero variance over the training set are left out.
    pub kept: Vec<bool>,
    /// Standardized training rows, restricted to kept features.
    pub train: Vec<Vec<f64>>,
    pub labels: Vec<Class>,
}

impl KnnClassifier {
    /// Fits on the samples that have at least one border node.
    pub fn fit(samples: &[DatasetSample], k: usize, num_classes: u8, tie_break: TieBreak) -> Result<Self> {
        let rows: Vec<(Vec<f64>, Class)> = samples
            .iter()
            .filter_map(|s| knn_features(&s.subgraph, num_classes, tie_break).ok().map(|f| (f.to_vec(), s.label)))
            .collect();
        Self::fit_features(&rows, k, num_classes, tie_break)
    }

    pub fn fit_features(rows: &[(Vec<f64>, Class)], k: usize, num_classes: u8, tie_break: TieBreak) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if rows.len() < k {
            return Err(Error::NotEnoughSamples { needed: k, got: rows.len() });
        }
        let dims = rows[0].0.len();
        if let Some((r, _)) = rows.iter().find(|(r, _)| r.len() != dims) {
            return Err(Error::LengthMismatch(dims, r.len()));
        }
        let n = rows.len() as f64;
        let mean: Vec<f64> = (0..dims).map(|d| rows.iter().map(|(r, _)| r[d]).sum::<f64>() / n).collect();
        let std: Vec<f64> =
            (0..dims).map(|d| (rows.iter().map(|(r, _)| (r[d] - mean[d]).powi(2)).sum::<f64>() / n).sqrt()).collect();
        let kept: Vec<bool> = std.iter().map(|&s| s > 1e-12).collect();
        let mut model = KnnClassifier {
            k,
            num_classes,
            tie_break,
            mean,
            std,
            kept,
            train: Vec::with_capacity(rows.len()),
            labels: rows.iter().map(|(_, l)| *l).collect(),
        };
        model.train = rows.iter().map(|(r, _)| model.standardize(r)).collect();
        Ok(model)
    }

    fn standardize(&self, raw: &[f64]) -> Vec<f64> {
        raw.iter().enumerate().filter(|(d, _)| self.kept[*d]).map(|(d, x)| (x - self.mean[d]) / self.std[d]).collect()
    }

    /// Vote among the `k` nearest training rows; distance ties go to the
    /// earlier training row.
    pub fn classify_features(&self, features: &FeatureVector) -> Result<Class> {
        let raw = features.to_vec();
        if raw.len() != self.kept.len() {
            return Err(Error::LengthMismatch(self.kept.len(), raw.len()));
        }
        let q = self.standardize(&raw);
        let mut dist: Vec<(f64, usize)> = self
            .train
            .iter()
            .enumerate()
            .map(|(i, row)| (row.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        let k = self.k.min(dist.len());
        dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; self.num_classes as usize];
        for &(_, i) in &dist[..k] {
            votes[self.labels[i].slot()] += 1;
        }
        Ok(plurality(&votes, self.tie_break))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: KnnClassifier = serde_json::from_str(text)?;
        if model.labels.len() != model.train.len() || model.mean.len() != model.kept.len() {
            return Err(Error::InvalidArgument("inconsistent kNN model".into()));
        }
        Ok(model)
    }
}

impl SubgraphClassifier for KnnClassifier {
    fn classify_subgraph(&self, sub: &Subgraph, num_classes: u8) -> Result<Class> {
        if num_classes != self.num_classes {
            return Err(Error::InvalidArgument(format!(
                "model has {} classes, graph has {num_classes}",
                self.num_classes
            )));
        }
        self.classify_features(&knn_features(sub, num_classes, self.tie_break)?)
    }
}

impl Classifier for KnnClassifier {
    fn classify(&self, hsg: &Hsg, node: NodeId) -> Result<Class> {
        let sub = hsg.semantic_subgraph(node)?;
        self.classify_subgraph(&sub, hsg.num_classes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::SubgraphNode;

    fn c(k: i64) -> Class {
        Class::new(k, 3).unwrap()
    }

    fn sub(classes: &[i64], borders: &[usize]) -> Subgraph {
        Subgraph {
            nodes: classes
                .iter()
                .enumerate()
                .map(|(i, &k)| SubgraphNode {
                    id: format!("n{i}"),
                    pos: [i as f64, 0.0, 0.0],
                    class: c(k),
                    border: borders.contains(&i),
                })
                .collect(),
            edges: vec![],
        }
    }

    #[test]
    fn feature_examples() {
        let f = knn_features(&sub(&[1, 1, 2, 3], &[2]), 3, TieBreak::Favorable).unwrap();
        assert_eq!(f.proportions, vec![0.5, 0.25, 0.25]);
        assert_eq!(f.border_majority, c(2));
        let f = knn_features(&sub(&[1, 1, 1], &[0]), 3, TieBreak::Favorable).unwrap();
        assert_eq!(f.proportions, vec![1.0, 0.0, 0.0]);
        assert_eq!(f.border_majority, c(1));
        assert!(matches!(knn_features(&sub(&[1], &[]), 3, TieBreak::Favorable), Err(Error::NoBorderNodes)));
    }

    fn row(p: [f64; 3], bm: i64, label: i64) -> (Vec<f64>, Class) {
        (FeatureVector { proportions: p.to_vec(), border_majority: c(bm) }.to_vec(), c(label))
    }

    fn fv(p: [f64; 3], bm: i64) -> FeatureVector {
        FeatureVector { proportions: p.to_vec(), border_majority: c(bm) }
    }

    #[test]
    fn exact_match_with_k1() {
        let rows = vec![row([1.0, 0.0, 0.0], 1, 1), row([0.2, 0.3, 0.5], 3, 3), row([0.5, 0.5, 0.0], 2, 2)];
        let m = KnnClassifier::fit_features(&rows, 1, 3, TieBreak::Favorable).unwrap();
        assert_eq!(m.classify_features(&fv([0.2, 0.3, 0.5], 3)).unwrap(), c(3));
        assert_eq!(m.classify_features(&fv([0.5, 0.5, 0.0], 2)).unwrap(), c(2));
    }

    #[test]
    fn plurality_of_neighbors() {
        let mut rows = vec![
            row([0.9, 0.1, 0.0], 1, 2),
            row([0.8, 0.2, 0.0], 1, 2),
            row([0.85, 0.15, 0.0], 1, 2),
            row([0.7, 0.3, 0.0], 1, 1),
            row([0.95, 0.05, 0.0], 1, 3),
        ];
        rows.push(row([0.0, 0.0, 1.0], 3, 3));
        rows.push(row([0.0, 0.1, 0.9], 3, 3));
        let m = KnnClassifier::fit_features(&rows, 5, 3, TieBreak::Favorable).unwrap();
        assert_eq!(m.classify_features(&fv([0.85, 0.15, 0.0], 1)).unwrap(), c(2));
    }

    #[test]
    fn constant_feature_is_dropped() {
        let rows = vec![row([1.0, 0.0, 0.0], 1, 1), row([0.5, 0.5, 0.0], 1, 2), row([0.0, 1.0, 0.0], 1, 2)];
        let m = KnnClassifier::fit_features(&rows, 1, 3, TieBreak::Favorable).unwrap();
        // third proportion and border majority never vary
        assert_eq!(m.kept, vec![true, true, false, false]);
        assert_eq!(m.train[0].len(), 2);
    }

    #[test]
    fn duplicated_single_sample() {
        let rows = vec![row([0.3, 0.3, 0.4], 2, 3); 5];
        let m = KnnClassifier::fit_features(&rows, 5, 3, TieBreak::Favorable).unwrap();
        assert_eq!(m.classify_features(&fv([1.0, 0.0, 0.0], 1)).unwrap(), c(3));
    }

    #[test]
    fn k_equal_to_training_size_is_global_plurality() {
        let rows = vec![
            row([1.0, 0.0, 0.0], 1, 1),
            row([0.0, 1.0, 0.0], 2, 2),
            row([0.0, 0.9, 0.1], 2, 2),
            row([0.0, 0.0, 1.0], 3, 3),
        ];
        let m = KnnClassifier::fit_features(&rows, 4, 3, TieBreak::Favorable).unwrap();
        for q in [fv([1.0, 0.0, 0.0], 1), fv([0.0, 0.0, 1.0], 3)] {
            assert_eq!(m.classify_features(&q).unwrap(), c(2));
        }
    }

    #[test]
    fn too_few_samples() {
        let rows = vec![row([1.0, 0.0, 0.0], 1, 1)];
        assert!(matches!(
            KnnClassifier::fit_features(&rows, 5, 3, TieBreak::Favorable),
            Err(Error::NotEnoughSamples { needed: 5, got: 1 })
        ));
    }

    #[test]
    fn model_json_round_trip() {
        let rows = vec![row([1.0, 0.0, 0.0], 1, 1), row([0.5, 0.5, 0.0], 2, 2)];
        let m = KnnClassifier::fit_features(&rows, 1, 3, TieBreak::Favorable).unwrap();
        assert_eq!(KnnClassifier::from_json(&m.to_json()).unwrap(), m);
    }
}
