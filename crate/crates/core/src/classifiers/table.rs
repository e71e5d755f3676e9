use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::error::{Error, Result};
use crate::hsg::{Class, Hsg, NodeId};

/// Prediction-JSON: `{"layer": l, "predictions": {"<node id>": class}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionDocument {
    pub layer: usize,
    pub predictions: BTreeMap<String, i64>,
}

/// Looks classes up from an externally produced prediction table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableClassifier {
    layer: usize,
    num_classes: u8,
    predictions: BTreeMap<String, Class>,
}

impl TableClassifier {
    pub fn from_document(doc: &PredictionDocument, num_classes: u8) -> Result<Self> {
        let predictions = doc
            .predictions
            .iter()
            .map(|(id, &c)| Ok((id.clone(), Class::new(c, num_classes)?)))
            .collect::<Result<_>>()?;
        Ok(TableClassifier { layer: doc.layer, num_classes, predictions })
    }

    pub fn from_json(text: &str, num_classes: u8) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?, num_classes)
    }

    pub fn from_pairs<'s>(hsg: &Hsg, pairs: impl IntoIterator<Item = (&'s str, i64)>) -> Result<Self> {
        let mut layer = None;
        let mut predictions = BTreeMap::new();
        for (id, c) in pairs {
            let v = hsg.lookup(id).ok_or_else(|| Error::DanglingReference(id.into()))?;
            layer.get_or_insert(hsg.layer(v));
            predictions.insert(id.to_string(), Class::new(c, hsg.num_classes())?);
        }
        Ok(TableClassifier { layer: layer.unwrap_or(1), num_classes: hsg.num_classes(), predictions })
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    pub fn len(&self) -> usize {
        self.predictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predictions.is_empty()
    }

    pub fn get(&self, id: &str) -> Result<Class> {
        self.predictions.get(id).copied().ok_or_else(|| Error::NoPrediction(id.into()))
    }

    pub fn to_document(&self) -> PredictionDocument {
        PredictionDocument {
            layer: self.layer,
            predictions: self.predictions.iter().map(|(k, c)| (k.clone(), c.get() as i64)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn num_classes(&self) -> u8 {
        self.num_classes
    }
}

impl Classifier for TableClassifier {
    fn classify(&self, hsg: &Hsg, node: NodeId) -> Result<Class> {
        self.get(hsg.name(node))
    }
}
