//! Benchmark suites: scenario families, per-run metrics, CSV/JSON output.
//!
//! CSV columns, in order:
//! `scenario, seed, rep, algo, start, goal, nodes, found, expanded,
//! classifier_queries, top_class, top_count, weight, reference, optimal,
//! time_s`. Only `time_s` depends on the machine; every other column is a
//! function of the suite file.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::rc::Rc;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::class_order::OrderMode;
use crate::classifiers::{generate_dataset, Classifier, DiskSpec, KnnClassifier, MajorityClass, TableClassifier};
use crate::coa::CoaConfig;
use crate::error::{Error, Result};
use crate::graph::LayerGraph;
use crate::hcoa::{flat_coa, hcoa_star, HcoaConfig};
use crate::hsg::{Hsg, NodeId};
use crate::ma_star::ma_star;
use crate::oracle::{exact_optimum, oracle_optimal, weights_match, OracleLimits, OracleResult};
use crate::scenario::{
    gen_hier_hsg, random_connected_graph, random_endpoints, road_grass_river, single_room_hsg, HierParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algo {
    Coa,
    HcoaMc,
    HcoaKnn,
    HcoaTable,
    Ma(f64),
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "coa" => Algo::Coa,
            "hcoa-mc" => Algo::HcoaMc,
            "hcoa-knn" => Algo::HcoaKnn,
            "hcoa-table" => Algo::HcoaTable,
            _ => match s.strip_prefix("ma:").map(str::parse::<f64>) {
                Some(Ok(alpha)) => Algo::Ma(alpha),
                _ => return Err(Error::InvalidArgument(format!("unknown algorithm {s:?}"))),
            },
        })
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algo::Coa => f.write_str("coa"),
            Algo::HcoaMc => f.write_str("hcoa-mc"),
            Algo::HcoaKnn => f.write_str("hcoa-knn"),
            Algo::HcoaTable => f.write_str("hcoa-table"),
            Algo::Ma(a) => write!(f, "ma:{a}"),
        }
    }
}

impl Serialize for Algo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Algo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Where scenario graphs come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Hier(HierParams),
    /// Random connected single-room graphs.
    Random {
        nodes: usize,
        edges: usize,
        num_classes: u8,
    },
    /// The bundled road/grass/river grid with its fixed endpoints.
    Grid,
    /// One HSG file; endpoints vary per scenario.
    File {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Enumeration when layer 0 fits the enumeration limits, else the exact solver.
    #[default]
    Auto,
    Enumeration,
    Exact,
}

/// Suite file. Relative paths are resolved by the caller.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default = "default_name")]
    pub name: String,
    pub seed: u64,
    pub scenarios: usize,
    pub family: Family,
    #[serde(default = "default_algos")]
    pub algos: Vec<Algo>,
    #[serde(default = "one")]
    pub reps: usize,
    #[serde(default)]
    pub order: OrderMode,
    #[serde(default)]
    pub fallback_flat: bool,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default)]
    pub knn_model: Option<PathBuf>,
    #[serde(default)]
    pub predictions: Option<PathBuf>,
    /// Graphs generated to fit kNN when no model file is given.
    #[serde(default = "default_train_graphs")]
    pub knn_train_graphs: usize,
    #[serde(default = "default_per_room")]
    pub knn_per_room: usize,
    #[serde(default = "default_k")]
    pub knn_k: usize,
}

fn default_name() -> String {
    "suite".into()
}
fn default_algos() -> Vec<Algo> {
    vec![Algo::Coa, Algo::HcoaMc]
}
fn one() -> usize {
    1
}
fn default_train_graphs() -> usize {
    4
}
fn default_per_room() -> usize {
    20
}
fn default_k() -> usize {
    5
}

impl SuiteSpec {
    pub fn new(seed: u64, scenarios: usize, family: Family) -> Self {
        SuiteSpec {
            name: default_name(),
            seed,
            scenarios,
            family,
            algos: default_algos(),
            reps: 1,
            order: OrderMode::default(),
            fallback_flat: false,
            reference: Reference::default(),
            knn_model: None,
            predictions: None,
            knn_train_graphs: default_train_graphs(),
            knn_per_room: default_per_room(),
            knn_k: default_k(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One start/goal query on one graph.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: usize,
    pub seed: u64,
    pub hsg: Rc<Hsg>,
    pub start: NodeId,
    pub goal: NodeId,
}

fn family_graph(family: &Family, seed: u64, file: Option<&Rc<Hsg>>) -> Result<Rc<Hsg>> {
    Ok(match family {
        Family::Hier(p) => gen_hier_hsg(p, seed)?.into(),
        Family::Random { nodes, edges, num_classes } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            single_room_hsg(&random_connected_graph(*nodes, *edges, *num_classes, &mut rng)?)?.into()
        }
        Family::Grid => road_grass_river().0.into(),
        Family::File { .. } => file.expect("file family is loaded").clone(),
    })
}

/// Expands the spec into concrete scenarios. Graph seeds come from one
/// stream seeded by `spec.seed`, so the list depends on nothing else.
pub fn build_scenarios(spec: &SuiteSpec) -> Result<Vec<Scenario>> {
    let file = match &spec.family {
        Family::File { path } => Some(Rc::new(Hsg::from_json(&std::fs::read_to_string(path)?)?)),
        _ => None,
    };
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.scenarios);
    for id in 0..spec.scenarios {
        let seed: u64 = master.gen();
        let hsg = family_graph(&spec.family, seed, file.as_ref())?;
        let (start, goal) = if matches!(spec.family, Family::Grid) {
            let (g, s, t) = road_grass_river();
            (g.lookup(s).expect("fixture start"), g.lookup(t).expect("fixture goal"))
        } else {
            random_endpoints(&hsg, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15))
        };
        out.push(Scenario { id, seed, hsg, start, goal });
    }
    Ok(out)
}

/// Per-run measurements; one CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub scenario: usize,
    pub seed: u64,
    pub rep: usize,
    pub algo: String,
    pub start: String,
    pub goal: String,
    pub nodes: usize,
    pub found: bool,
    pub expanded: u64,
    pub classifier_queries: usize,
    pub top_class: Option<u8>,
    pub top_count: Option<u32>,
    pub weight: Option<f64>,
    /// `enum`, `exact`, or empty when no reference was computed.
    pub reference: String,
    /// Agreement with the reference on (top class, count, weight).
    pub optimal: Option<bool>,
    pub time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoSummary {
    pub algo: String,
    pub runs: usize,
    pub found: usize,
    pub mean_expanded: f64,
    pub mean_time_s: f64,
    pub std_time_s: f64,
    /// Scenarios with a reference optimum.
    pub oracle_feasible: usize,
    pub optimal: usize,
    pub optimality_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub records: Vec<MetricsRecord>,
    pub summary: Vec<AlgoSummary>,
}

struct Outcome {
    found: bool,
    expanded: u64,
    queries: usize,
    key: Option<(u8, u32)>,
    weight: Option<f64>,
}

fn reference_optimum(
    spec: &SuiteSpec,
    lg: &LayerGraph,
    s: NodeId,
    t: NodeId,
) -> Result<Option<(&'static str, Option<OracleResult>)>> {
    let limits = OracleLimits::default();
    let fits = lg.graph.len() <= limits.max_nodes;
    let (label, r) = match spec.reference {
        Reference::Exact => ("exact", exact_optimum(&lg.graph, s, t)),
        Reference::Auto if !fits => ("exact", exact_optimum(&lg.graph, s, t)),
        Reference::Enumeration if !fits => return Ok(None),
        _ => match oracle_optimal(&lg.graph, s, t, limits) {
            Err(Error::EnumerationCap(_)) if spec.reference == Reference::Auto => {
                ("exact", exact_optimum(&lg.graph, s, t))
            }
            Err(Error::EnumerationCap(_)) => return Ok(None),
            r => ("enum", r),
        },
    };
    match r {
        Ok(r) => Ok(Some((label, Some(r)))),
        Err(Error::NoPath { .. }) => Ok(Some((label, None))),
        Err(e) => Err(e),
    }
}

fn run_once(
    algo: Algo,
    spec: &SuiteSpec,
    sc: &Scenario,
    lg: &LayerGraph,
    clf: Option<&dyn Classifier>,
) -> Result<Outcome> {
    let hsg = &*sc.hsg;
    let found = |expanded, queries, key, weight| Outcome {
        found: true,
        expanded,
        queries,
        key: Some(key),
        weight: Some(weight),
    };
    let missing = |expanded| Outcome { found: false, expanded, queries: 0, key: None, weight: None };
    match algo {
        Algo::Coa => match flat_coa(hsg, sc.start, sc.goal, CoaConfig::with_mode(spec.order)) {
            Ok(r) => {
                let k = r.key();
                Ok(found(r.expanded, 0, (k.class, k.count), r.g))
            }
            Err(Error::NoPath { .. }) => Ok(missing(0)),
            Err(e) => Err(e),
        },
        Algo::Ma(alpha) => {
            let (s, t) = (lg.local(sc.start)?, lg.local(sc.goal)?);
            let g = &lg.graph;
            match ma_star(g, s, t, alpha, crate::coa::euclidean_to(g, t), |v| Ok(g.class(v)), hsg.num_classes()) {
                Ok(r) => {
                    let k = r.key();
                    Ok(found(r.expanded, 0, (k.class, k.count), r.g))
                }
                Err(Error::NoPath { .. }) => Ok(missing(0)),
                Err(e) => Err(e),
            }
        }
        Algo::HcoaMc | Algo::HcoaKnn | Algo::HcoaTable => {
            let clf = clf.expect("classifier prepared for hierarchical runs");
            let config = HcoaConfig { mode: spec.order, fallback_flat: spec.fallback_flat, ..Default::default() };
            match hcoa_star(hsg, sc.start, sc.goal, clf, config) {
                Ok(r) => {
                    let k = r.key();
                    Ok(found(r.total_expanded, r.classifier_queries, (k.class, k.count), r.g))
                }
                Err(Error::NoPath { .. }) => Ok(missing(0)),
                Err(e) => Err(e),
            }
        }
    }
}

fn fit_suite_knn(spec: &SuiteSpec) -> Result<KnnClassifier> {
    if let Some(path) = &spec.knn_model {
        return KnnClassifier::from_json(&std::fs::read_to_string(path)?);
    }
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x6b6e_6e5f_7472_6169);
    let mut samples = Vec::new();
    let mut num_classes = 0;
    let file = match &spec.family {
        Family::File { path } => Some(Rc::new(Hsg::from_json(&std::fs::read_to_string(path)?)?)),
        _ => None,
    };
    for _ in 0..spec.knn_train_graphs {
        let seed: u64 = master.gen();
        let hsg = family_graph(&spec.family, seed, file.as_ref())?;
        if hsg.num_layers() < 2 {
            continue;
        }
        num_classes = hsg.num_classes();
        samples.extend(generate_dataset(&hsg, 1, spec.knn_per_room, &DiskSpec::default(), seed)?.samples);
    }
    KnnClassifier::fit(&samples, spec.knn_k, num_classes, Default::default())
}

/// Runs every algorithm on every scenario `spec.reps` times.
///
/// Classifier fitting and reference optima are computed outside the timed
/// region; timing covers the planning call only.
pub fn run_suite(spec: &SuiteSpec) -> Result<SuiteReport> {
    if spec.reps == 0 || spec.algos.is_empty() {
        return Err(Error::InvalidArgument("need at least one repetition and one algorithm".into()));
    }
    let scenarios = build_scenarios(spec)?;
    let mc = MajorityClass::default();
    let knn = if spec.algos.contains(&Algo::HcoaKnn) { Some(fit_suite_knn(spec)?) } else { None };
    let table = match (&spec.predictions, spec.algos.contains(&Algo::HcoaTable)) {
        (Some(path), true) => {
            let k = scenarios.first().map_or(1, |s| s.hsg.num_classes());
            Some(TableClassifier::from_json(&std::fs::read_to_string(path)?, k)?)
        }
        (None, true) => return Err(Error::InvalidArgument("hcoa-table needs a predictions file".into())),
        _ => None,
    };
    let mut records = Vec::new();
    for sc in &scenarios {
        let lg = LayerGraph::new(&sc.hsg, 0)?;
        let reference = reference_optimum(spec, &lg, lg.local(sc.start)?, lg.local(sc.goal)?)?;
        for &algo in &spec.algos {
            let clf: Option<&dyn Classifier> = match algo {
                Algo::HcoaMc => Some(&mc),
                Algo::HcoaKnn => knn.as_ref().map(|c| c as &dyn Classifier),
                Algo::HcoaTable => table.as_ref().map(|c| c as &dyn Classifier),
                _ => None,
            };
            for rep in 0..spec.reps {
                let t0 = Instant::now();
                let out = run_once(algo, spec, sc, &lg, clf)?;
                let time_s = t0.elapsed().as_secs_f64();
                let optimal = reference.as_ref().map(|(_, best)| match (best, out.key) {
                    (Some(b), Some(key)) => {
                        key == (b.top_class, b.count) && weights_match(out.weight.unwrap_or(f64::NAN), b.weight)
                    }
                    (None, None) => true,
                    _ => false,
                });
                records.push(MetricsRecord {
                    scenario: sc.id,
                    seed: sc.seed,
                    rep,
                    algo: algo.to_string(),
                    start: sc.hsg.name(sc.start).to_string(),
                    goal: sc.hsg.name(sc.goal).to_string(),
                    nodes: lg.graph.len(),
                    found: out.found,
                    expanded: out.expanded,
                    classifier_queries: out.queries,
                    top_class: out.key.map(|k| k.0),
                    top_count: out.key.map(|k| k.1),
                    weight: out.weight,
                    reference: reference.as_ref().map_or("", |r| r.0).to_string(),
                    optimal,
                    time_s,
                });
            }
        }
    }
    let summary = summarize(&spec.algos, &records);
    Ok(SuiteReport { name: spec.name.clone(), records, summary })
}

/// Per-algorithm aggregates. Optimality counts each scenario once (its
/// first repetition); the other aggregates use every run.
pub fn summarize(algos: &[Algo], records: &[MetricsRecord]) -> Vec<AlgoSummary> {
    algos
        .iter()
        .map(|algo| {
            let name = algo.to_string();
            let runs: Vec<&MetricsRecord> = records.iter().filter(|r| r.algo == name).collect();
            let n = runs.len().max(1) as f64;
            let mean_time = runs.iter().map(|r| r.time_s).sum::<f64>() / n;
            let var = runs.iter().map(|r| (r.time_s - mean_time).powi(2)).sum::<f64>() / n;
            let firsts: Vec<&&MetricsRecord> = runs.iter().filter(|r| r.rep == 0 && r.optimal.is_some()).collect();
            let optimal = firsts.iter().filter(|r| r.optimal == Some(true)).count();
            AlgoSummary {
                algo: name,
                runs: runs.len(),
                found: runs.iter().filter(|r| r.found).count(),
                mean_expanded: runs.iter().map(|r| r.expanded as f64).sum::<f64>() / n,
                mean_time_s: mean_time,
                std_time_s: var.sqrt(),
                oracle_feasible: firsts.len(),
                optimal,
                optimality_rate: (!firsts.is_empty()).then(|| optimal as f64 / firsts.len() as f64),
            }
        })
        .collect()
}

pub fn write_csv(records: &[MetricsRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(report: &SuiteReport, out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(out, report)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algo_names_round_trip() {
        for s in ["coa", "hcoa-mc", "hcoa-knn", "hcoa-table", "ma:2", "ma:10", "ma:0.5"] {
            assert_eq!(s.parse::<Algo>().unwrap().to_string(), s);
        }
        assert!("ma:x".parse::<Algo>().is_err());
        assert!("dijkstra".parse::<Algo>().is_err());
    }

    #[test]
    fn coa_is_always_optimal() {
        let mut spec = SuiteSpec::new(7, 30, Family::Random { nodes: 10, edges: 16, num_classes: 3 });
        spec.algos = vec![Algo::Coa, Algo::HcoaMc, Algo::Ma(10.0)];
        let report = run_suite(&spec).unwrap();
        assert_eq!(report.records.len(), 90);
        let coa = &report.summary[0];
        assert_eq!(coa.oracle_feasible, 30);
        assert_eq!(coa.optimality_rate, Some(1.0));
        assert!(report.records.iter().all(|r| r.reference == "enum"));
    }

    #[test]
    fn csv_is_reproducible_apart_from_time() {
        let mut spec =
            SuiteSpec::new(3, 4, Family::Hier(HierParams { rooms: 4, nodes_per_room: 6, ..Default::default() }));
        spec.algos = vec![Algo::Coa, Algo::HcoaMc, Algo::HcoaKnn];
        spec.reps = 2;
        spec.knn_train_graphs = 2;
        spec.knn_per_room = 5;
        let strip = |report: &SuiteReport| {
            let mut recs = report.records.clone();
            recs.iter_mut().for_each(|r| r.time_s = 0.0);
            let mut buf = Vec::new();
            write_csv(&recs, &mut buf).unwrap();
            buf
        };
        let a = run_suite(&spec).unwrap();
        let b = run_suite(&spec).unwrap();
        assert_eq!(strip(&a), strip(&b));
        let header = String::from_utf8(strip(&a)).unwrap();
        assert!(header.starts_with(
            "scenario,seed,rep,algo,start,goal,nodes,found,expanded,classifier_queries,top_class,top_count,weight,reference,optimal,time_s\n"
        ));
    }

    #[test]
    fn table_needs_predictions() {
        let mut spec = SuiteSpec::new(1, 1, Family::Grid);
        spec.algos = vec![Algo::HcoaTable];
        assert!(run_suite(&spec).is_err());
    }

    #[test]
    fn spec_json_defaults() {
        let spec = SuiteSpec::from_json(r#"{"seed": 1, "scenarios": 2, "family": {"kind": "grid"}}"#).unwrap();
        assert_eq!(spec.algos, vec![Algo::Coa, Algo::HcoaMc]);
        assert_eq!(spec.reps, 1);
        let spec = SuiteSpec::from_json(
            r#"{"seed": 1, "scenarios": 2, "family": {"kind": "hier", "rooms": 3}, "algos": ["ma:2"]}"#,
        )
        .unwrap();
        assert!(matches!(spec.family, Family::Hier(HierParams { rooms: 3, nodes_per_room: 25, .. })));
        assert!(SuiteSpec::from_json(r#"{"seed": 1, "scenarios": 2, "family": {"kind": "grid"}, "bogus": 1}"#).is_err());
    }
}
