//! Class-ordered path planning on hierarchical semantic graphs.
//!
//! Paths are ranked first by the least favorable semantic class they cross
//! and how often they cross it, then by length. [`coa_star`] searches a
//! single layer; [`hcoa_star`] searches top-down through the layers and
//! prunes each lower layer to the nodes under the path found above it.

pub mod class_order;
pub mod classifiers;
pub mod coa;
pub mod error;
pub mod graph;
pub mod hcoa;
pub mod hsg;
pub mod ma_star;
pub mod oracle;
pub mod scenario;
pub mod suite;

pub use class_order::{ClassVector, OrderMode, TopKey};
pub use classifiers::{Classifier, KnnClassifier, MajorityClass, TableClassifier, TieBreak};
pub use coa::{coa_star, euclidean_to, CoaConfig, PathResult, Relaxation};
pub use error::{Error, Result};
pub use graph::{Graph, LayerGraph, SearchGraph};
pub use hcoa::{flat_coa, hcoa_star, HcoaConfig, HierResult};
pub use hsg::{Class, Hsg, NodeId, Point3};
pub use ma_star::ma_star;
pub use oracle::{exact_optimum, oracle_optimal, OracleLimits, OracleResult};
