use serde::{Deserialize, Serialize};

use super::{plurality, Classifier, SubgraphClassifier, TieBreak};
use crate::error::{Error, Result};
use crate::hsg::{Class, Hsg, NodeId, Subgraph};

/// Most frequent layer-0 class below the node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityClass {
    pub tie_break: TieBreak,
}

pub fn mc_classify(sub: &Subgraph, num_classes: u8, tie_break: TieBreak) -> Result<Class> {
    if sub.is_empty() {
        return Err(Error::EmptySubgraph);
    }
    let mut counts = vec![0usize; num_classes as usize];
    for n in &sub.nodes {
        counts[n.class.slot()] += 1;
    }
    Ok(plurality(&counts, tie_break))
}

impl Classifier for MajorityClass {
    fn classify(&self, hsg: &Hsg, node: NodeId) -> Result<Class> {
        let below = hsg.descendants(node);
        if below.is_empty() {
            return Err(Error::EmptySubgraph);
        }
        let mut counts = vec![0usize; hsg.num_classes() as usize];
        for &u in below {
            counts[hsg.class(u).expect("layer-0 nodes carry a class").slot()] += 1;
        }
        Ok(plurality(&counts, self.tie_break))
    }
}

impl SubgraphClassifier for MajorityClass {
    fn classify_subgraph(&self, sub: &Subgraph, num_classes: u8) -> Result<Class> {
        mc_classify(sub, num_classes, self.tie_break)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsg::SubgraphNode;

    fn sub(classes: &[i64]) -> Subgraph {
        Subgraph {
            nodes: classes
                .iter()
                .enumerate()
                .map(|(i, &k)| SubgraphNode {
                    id: format!("n{i}"),
                    pos: [i as f64, 0.0, 0.0],
                    class: Class::new(k, 3).unwrap(),
                    border: false,
                })
                .collect(),
            edges: vec![],
        }
    }

    #[test]
    fn examples() {
        let fav = TieBreak::Favorable;
        assert_eq!(mc_classify(&sub(&[1, 1, 1, 1, 1, 2, 2, 3]), 3, fav).unwrap().get(), 1);
        assert_eq!(mc_classify(&sub(&[1, 3, 1, 3, 1, 3]), 3, fav).unwrap().get(), 1);
        assert_eq!(mc_classify(&sub(&[1, 3, 1, 3, 1, 3]), 3, TieBreak::Conservative).unwrap().get(), 3);
        assert_eq!(mc_classify(&sub(&[2]), 3, fav).unwrap().get(), 2);
        assert!(matches!(mc_classify(&sub(&[]), 3, fav), Err(Error::EmptySubgraph)));
    }
}
