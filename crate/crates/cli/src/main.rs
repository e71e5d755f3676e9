use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use hcoa_core::classifiers::{accuracy, generate_dataset, Dataset, DiskSpec, SubgraphClassifier};
use hcoa_core::scenario::{gen_grid_world, gen_hier_hsg, road_grass_river_map, HierParams};
use hcoa_core::suite::{run_suite, write_csv, write_json, Algo, Family, SuiteSpec};
use hcoa_core::{
    euclidean_to, flat_coa, hcoa_star, ma_star, Classifier, CoaConfig, Error, HcoaConfig, Hsg, KnnClassifier,
    LayerGraph, MajorityClass, NodeId, OrderMode, TableClassifier, TieBreak,
};

#[derive(Parser)]
#[command(name = "hcoa", version, about = "Class-ordered path planning on hierarchical semantic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a path between two layer-0 nodes.
    Plan(PlanArgs),
    /// Generate a graph.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Sample a room-classification dataset from a graph.
    Dataset(DatasetArgs),
    /// Fit a kNN room classifier on a dataset.
    FitKnn {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        conservative_ties: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark suite.
    Bench(BenchArgs),
    /// Accuracy of a classifier on a dataset.
    EvalClassifier {
        #[arg(long)]
        dataset: PathBuf,
        /// kNN model file, or `mc` for the majority-class rule.
        #[arg(long)]
        model: String,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Coa,
    Hcoa,
    Ma,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ClassifierArg {
    Mc,
    Knn,
    Table,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Top,
    Lex,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    start: String,
    #[arg(long)]
    goal: String,
    #[arg(long, value_enum, default_value = "hcoa")]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "mc")]
    classifier: ClassifierArg,
    #[arg(long)]
    knn_model: Option<PathBuf>,
    #[arg(long)]
    predictions: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "top")]
    order: OrderArg,
    #[arg(long, default_value_t = 10.0)]
    alpha: f64,
    #[arg(long)]
    fallback_flat: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum GenKind {
    /// 4-connected grid under one root. Classes are drawn at random unless
    /// `--road-grass-river` is given.
    Grid {
        #[arg(long, default_value_t = 5)]
        rows: usize,
        #[arg(long, default_value_t = 5)]
        cols: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long, default_value_t = 3)]
        num_classes: u8,
        #[arg(long)]
        road_grass_river: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rooms of random places joined by doorways.
    Hier {
        #[arg(long, default_value_t = 12)]
        rooms: usize,
        #[arg(long, default_value_t = 25)]
        nodes_per_room: usize,
        #[arg(long, default_value_t = 2)]
        doorways: usize,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        #[arg(long, default_value_t = 3)]
        num_classes: u8,
        #[arg(long, default_value_t = 10.0)]
        room_size: f64,
        #[arg(long)]
        tree_rooms: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    layer: usize,
    #[arg(long, default_value_t = 20)]
    per_room: usize,
    /// Fixed disk radius in meters (default: random in 1.5..=4).
    #[arg(long)]
    disk_radius: Option<f64>,
    /// Fixed disk class (default: random in 2..=K).
    #[arg(long)]
    disk_class: Option<u8>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    /// Comma-separated, e.g. `coa,hcoa-mc,ma:2`; overrides the suite file.
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<String>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::NoPath { layer }) => {
            match layer {
                Some(l) => eprintln!("no path (search failed on layer {l})"),
                None => eprintln!("no path"),
            }
            ExitCode::from(1)
        }
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> hcoa_core::Result<()> {
    match cli.command {
        Command::Plan(args) => plan(args),
        Command::Gen { kind } => gen(kind),
        Command::Dataset(args) => dataset(args),
        Command::FitKnn { dataset, k, conservative_ties, out } => {
            let ds = Dataset::from_json(&read(&dataset)?)?;
            let tie = if conservative_ties { TieBreak::Conservative } else { TieBreak::Favorable };
            let model = KnnClassifier::fit(&ds.samples, k, ds.num_classes, tie)?;
            log::info!("fitted on {} samples", model.labels.len());
            emit(out.as_deref(), &model.to_json())
        }
        Command::Bench(args) => bench(args),
        Command::EvalClassifier { dataset, model } => {
            let ds = Dataset::from_json(&read(&dataset)?)?;
            let clf: Box<dyn SubgraphClassifier> = if model == "mc" {
                Box::new(MajorityClass::default())
            } else {
                Box::new(KnnClassifier::from_json(&read(Path::new(&model))?)?)
            };
            let preds = ds
                .samples
                .iter()
                .map(|s| clf.classify_subgraph(&s.subgraph, ds.num_classes))
                .collect::<hcoa_core::Result<Vec<_>>>()?;
            let acc = accuracy(&preds, &ds.labels())?;
            writeln!(io::stdout(), "accuracy {acc:.6} over {} samples", preds.len())?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> hcoa_core::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> hcoa_core::Result<()> {
    match out {
        Some(p) => fs::write(p, text.as_bytes())?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn lookup(hsg: &Hsg, name: &str) -> hcoa_core::Result<NodeId> {
    hsg.lookup(name).ok_or_else(|| Error::InvalidArgument(format!("unknown node {name:?}")))
}

fn plan(args: PlanArgs) -> hcoa_core::Result<()> {
    let hsg = Hsg::from_json(&read(&args.graph)?)?;
    let start = lookup(&hsg, &args.start)?;
    let goal = lookup(&hsg, &args.goal)?;
    let mode = match args.order {
        OrderArg::Top => OrderMode::TopClass,
        OrderArg::Lex => OrderMode::FullLex,
    };
    let names = |path: &[NodeId]| path.iter().map(|&v| hsg.name(v).to_string()).collect::<Vec<_>>();

    let (path, g, theta, expanded, extra) = match args.algo {
        AlgoArg::Coa => {
            let r = flat_coa(&hsg, start, goal, CoaConfig::with_mode(mode))?;
            (r.path, r.g, r.theta, r.expanded, json!({}))
        }
        AlgoArg::Ma => {
            let lg = LayerGraph::new(&hsg, 0)?;
            let (s, t) = (lg.local(start)?, lg.local(goal)?);
            let graph = &lg.graph;
            let r =
                ma_star(graph, s, t, args.alpha, euclidean_to(graph, t), |v| Ok(graph.class(v)), hsg.num_classes())?;
            let path = r.path.iter().map(|&v| lg.global(v)).collect();
            (path, r.g, r.theta, r.expanded, json!({ "alpha": args.alpha }))
        }
        AlgoArg::Hcoa => {
            let clf: Box<dyn Classifier> = match args.classifier {
                ClassifierArg::Mc => Box::new(MajorityClass::default()),
                ClassifierArg::Knn => {
                    let p = args
                        .knn_model
                        .as_ref()
                        .ok_or_else(|| Error::InvalidArgument("--knn-model is required".into()))?;
                    Box::new(KnnClassifier::from_json(&read(p)?)?)
                }
                ClassifierArg::Table => {
                    let p = args
                        .predictions
                        .as_ref()
                        .ok_or_else(|| Error::InvalidArgument("--predictions is required".into()))?;
                    Box::new(TableClassifier::from_json(&read(p)?, hsg.num_classes())?)
                }
            };
            let config = HcoaConfig { mode, fallback_flat: args.fallback_flat, ..Default::default() };
            let r = hcoa_star(&hsg, start, goal, clf.as_ref(), config)?;
            let layers: Vec<_> = r
                .layers
                .iter()
                .map(|l| json!({ "layer": l.layer, "path": names(&l.result.path), "expanded": l.result.expanded }))
                .collect();
            let extra =
                json!({ "layers": layers, "classifier_queries": r.classifier_queries, "fell_back": r.fell_back });
            (r.path, r.g, r.theta, r.total_expanded, extra)
        }
    };
    let key = theta.top_key().expect("found path has finite class vector");
    let counts = theta.counts().expect("found path has finite class vector").to_vec();
    if args.json {
        let mut out = json!({
            "path": names(&path),
            "weight": g,
            "theta": counts,
            "top_class": key.class,
            "top_count": key.count,
            "expanded": expanded,
        });
        if let (Some(o), Some(e)) = (out.as_object_mut(), extra.as_object()) {
            o.extend(e.clone());
        }
        writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&out)?)?;
    } else {
        writeln!(io::stdout(), "path      {}", names(&path).join(" -> "))?;
        writeln!(io::stdout(), "weight    {g:.6}")?;
        writeln!(io::stdout(), "classes   {counts:?} (top class {} x{})", key.class, key.count)?;
        writeln!(io::stdout(), "expanded  {expanded}")?;
    }
    Ok(())
}

fn gen(kind: GenKind) -> hcoa_core::Result<()> {
    let (hsg, out) = match kind {
        GenKind::Grid { rows, cols, spacing, num_classes, road_grass_river, seed, out } => {
            let map = if road_grass_river {
                road_grass_river_map()
            } else {
                if num_classes == 0 {
                    return Err(Error::InvalidArgument("need at least one class".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(1..=num_classes as i64)).collect()).collect()
            };
            (gen_grid_world(&map, spacing, num_classes)?, out)
        }
        GenKind::Hier { rooms, nodes_per_room, doorways, layers, num_classes, room_size, tree_rooms, seed, out } => {
            let params = HierParams {
                rooms,
                nodes_per_room,
                doorways,
                layers,
                num_classes,
                room_size,
                tree_rooms,
                ..Default::default()
            };
            (gen_hier_hsg(&params, seed)?, out)
        }
    };
    emit(out.as_deref(), &hsg.to_json())
}

fn dataset(args: DatasetArgs) -> hcoa_core::Result<()> {
    let hsg = Hsg::from_json(&read(&args.graph)?)?;
    let mut disks = DiskSpec::default();
    if let Some(r) = args.disk_radius {
        disks.min_radius = r;
        disks.max_radius = r;
    }
    if let Some(k) = args.disk_class {
        disks.min_class = k;
        disks.max_class = Some(k);
    }
    let ds = generate_dataset(&hsg, args.layer, args.per_room, &disks, args.seed)?;
    log::info!("{} samples", ds.samples.len());
    emit(args.out.as_deref(), &ds.to_json())
}

fn bench(args: BenchArgs) -> hcoa_core::Result<()> {
    let mut spec = SuiteSpec::from_json(&read(&args.suite)?)?;
    let base = args.suite.parent().unwrap_or(Path::new("."));
    let rebase = |p: &mut PathBuf| {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    };
    if let Family::File { path } = &mut spec.family {
        rebase(path);
    }
    spec.knn_model.as_mut().map(rebase);
    spec.predictions.as_mut().map(rebase);
    if let Some(list) = args.algos {
        spec.algos = list.iter().map(|s| s.trim().parse::<Algo>()).collect::<hcoa_core::Result<_>>()?;
    }
    if let Some(reps) = args.reps {
        spec.reps = reps;
    }
    let report = run_suite(&spec)?;
    if let Some(p) = &args.out_csv {
        write_csv(&report.records, fs::File::create(p)?)?;
    }
    if let Some(p) = &args.out_json {
        write_json(&report, fs::File::create(p)?)?;
    }
    writeln!(
        io::stdout(),
        "{:<12} {:>6} {:>6} {:>12} {:>12} {:>12} {:>10}",
        "algo",
        "runs",
        "found",
        "mean_exp",
        "mean_ms",
        "std_ms",
        "optimal"
    )?;
    for s in &report.summary {
        let rate = s.optimality_rate.map_or("-".to_string(), |r| format!("{r:.4}"));
        writeln!(
            io::stdout(),
            "{:<12} {:>6} {:>6} {:>12.2} {:>12.4} {:>12.4} {:>10}",
            s.algo,
            s.runs,
            s.found,
            s.mean_expanded,
            s.mean_time_s * 1e3,
            s.std_time_s * 1e3,
            rate
        )?;
    }
    Ok(())
}
