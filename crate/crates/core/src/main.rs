use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hubroute::experiments::{self, ExperimentConfig, ExperimentId, Family, OutputFormat, PairPolicy};
use hubroute::generators::{
    configuration_model, sample_poisson, sample_power_law, PoissonConfig, PowerLawConfig,
};
use hubroute::graph::io::{create_file, open_file, read_edge_list, write_edge_list, write_id_mapping};
use hubroute::graph::{connected_components, giant_component, Graph, NodeId};
use hubroute::router::{route, route_all_pairs, PairSource};
use hubroute::{build_scheme, Error, Result, Scheme, SchemeConfig};

#[derive(Parser)]
#[command(name = "hubroute", version, about = "Hub-label compact routing experiments")]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration-model network and write it as an edge list.
    Generate(GenerateArgs),
    /// Build hubs, labels and tables for a graph and write the scheme dump.
    Build(BuildArgs),
    /// Route one packet, or every selected pair with --all, as JSON lines.
    #[command(visible_alias = "trace")]
    Route(RouteArgs),
    /// Run one of the experiments.
    Experiment(ExperimentArgs),
    /// Load an edge-list file, report what was read and write it densified.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "power_law")]
    family: Family,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 2.3)]
    gamma: f64,
    #[arg(long = "kmin", default_value_t = 2)]
    k_min: usize,
    #[arg(long = "kmax")]
    k_max: Option<usize>,
    #[arg(long, default_value_t = 7.0)]
    mean_degree: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Keep only the giant component.
    #[arg(long)]
    giant: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    graph_file: PathBuf,
    /// Hub count (clamped to the giant component size).
    #[arg(long, default_value_t = 100)]
    hubs: usize,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RouteArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Scheme dump written by `build` for the same graph file.
    #[arg(long)]
    scheme: Option<PathBuf>,
    /// Source id as it appears in the graph file.
    #[arg(long, required_unless_present = "all")]
    source: Option<u64>,
    #[arg(long, required_unless_present = "all")]
    target: Option<u64>,
    /// Stream traces for every selected pair.
    #[arg(long, conflicts_with_all = ["source", "target"])]
    all: bool,
    #[arg(long, default_value = "all")]
    pairs: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    id: ExperimentId,
    /// JSON file with configuration fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long, value_enum, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    #[arg(long = "kmin", value_delimiter = ',')]
    k_min: Option<Vec<usize>>,
    #[arg(long = "kmax")]
    k_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    nu: Option<Vec<u32>>,
    #[arg(long)]
    mean_degree: Option<f64>,
    #[arg(long)]
    hubs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    realizations: Option<usize>,
    /// all | auto | sample:K
    #[arg(long)]
    pairs: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    graph_file: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    graph_file: PathBuf,
    /// Keep only the giant component.
    #[arg(long)]
    giant: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write `dense original` id pairs here.
    #[arg(long)]
    mapping: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Build(args) => build(args),
        Command::Route(args) => route_cmd(args),
        Command::Experiment(args) => experiment(args),
        Command::Ingest(args) => ingest(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(create_file(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn generate(args: GenerateArgs) -> Result<()> {
    let degrees = match args.family {
        Family::PowerLaw => {
            let config = match args.k_max {
                Some(k_max) => PowerLawConfig::with_cutoff(args.n, args.gamma, args.k_min, k_max)?,
                None => PowerLawConfig::new(args.n, args.gamma, args.k_min)?,
            };
            sample_power_law(&config, args.seed)?
        }
        Family::Poisson => {
            sample_poisson(&PoissonConfig { n: args.n, mean_degree: args.mean_degree }, args.seed)?
        }
        Family::File => return Err(Error::InvalidArgument("generate needs a random family".into())),
    };
    let model = configuration_model(&degrees, args.seed.wrapping_add(1))?;
    log::info!(
        "{} edges, {} self-loops and {} multi-edges discarded",
        model.graph.edge_count(),
        model.self_loops,
        model.multi_edges
    );
    let graph = if args.giant { giant_component(&model.graph)?.graph } else { model.graph };
    let mut out = output(args.out.as_deref())?;
    write_edge_list(&graph, &mut out)?;
    out.flush()?;
    Ok(())
}

/// A file's giant component with ids mapped back to the file's ids.
struct LoadedGraph {
    graph: Graph,
    original: Vec<u64>,
}

impl LoadedGraph {
    fn load(path: &Path) -> Result<Self> {
        let list = read_edge_list(BufReader::new(open_file(path)?))?;
        let giant = giant_component(&list.graph)?;
        if giant.graph.node_count() < list.graph.node_count() {
            log::warn!(
                "using the giant component: {} of {} nodes",
                giant.graph.node_count(),
                list.graph.node_count()
            );
        }
        let original = giant.new_to_old.iter().map(|&u| list.original_ids[u as usize]).collect();
        Ok(LoadedGraph { graph: giant.graph, original })
    }

    fn dense(&self, id: u64) -> Result<NodeId> {
        self.original
            .binary_search(&id)
            .map(|i| i as NodeId)
            .map_err(|_| Error::InvalidArgument(format!("node {id} is not in the giant component")))
    }

    fn scheme(&self, args: &GraphArgs, dump: Option<&Path>) -> Result<Scheme<'_>> {
        match dump {
            Some(path) => Scheme::read_dump(&self.graph, BufReader::new(open_file(path)?)),
            None => {
                let hubs = args.hubs.clamp(1, self.graph.node_count());
                build_scheme(&self.graph, &SchemeConfig::new(hubs))
            }
        }
    }
}

fn build(args: BuildArgs) -> Result<()> {
    let loaded = LoadedGraph::load(&args.graph.graph_file)?;
    let scheme = loaded.scheme(&args.graph, None)?;
    let mut out = output(args.out.as_deref())?;
    scheme.write_dump(&mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TraceLine {
    source: u64,
    destination: u64,
    hub: u64,
    hops: usize,
    walk: Vec<u64>,
    rules: Vec<u8>,
}

fn route_cmd(args: RouteArgs) -> Result<()> {
    let loaded = LoadedGraph::load(&args.graph.graph_file)?;
    let scheme = loaded.scheme(&args.graph, args.scheme.as_deref())?;
    let mut out = output(args.out.as_deref())?;
    let mut emit = |trace: hubroute::RouteTrace| -> Result<()> {
        let line = TraceLine {
            source: loaded.original[trace.source as usize],
            destination: loaded.original[trace.destination as usize],
            hub: loaded.original[scheme.closest_hub(trace.destination) as usize],
            hops: trace.hops(),
            walk: trace.walk.iter().map(|&v| loaded.original[v as usize]).collect(),
            rules: trace.rules.iter().map(|r| r.number()).collect(),
        };
        serde_json::to_writer(&mut out, &line)?;
        writeln!(out)?;
        Ok(())
    };
    if args.all {
        let n = loaded.graph.node_count();
        let source = match args.pairs.parse::<PairPolicy>()? {
            PairPolicy::All => PairSource::Exhaustive,
            policy => policy.resolve(n, 0, 0, args.seed),
        };
        for trace in route_all_pairs(&scheme, source) {
            emit(trace?)?;
        }
    } else {
        let s = loaded.dense(args.source.expect("clap enforces source"))?;
        let t = loaded.dense(args.target.expect("clap enforces target"))?;
        emit(route(&scheme, s, t)?)?;
    }
    out.flush()?;
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut config = ExperimentConfig::defaults_for(args.id);
    if let Some(path) = &args.config {
        let value: serde_json::Value = serde_json::from_reader(BufReader::new(open_file(path)?))
            .map_err(|e| Error::InvalidArgument(format!("config file: {e}")))?;
        config = config.overlay_json(&value)?;
        config.experiment = args.id;
    }
    if let Some(v) = args.family {
        config.family = v;
    }
    if let Some(v) = args.families {
        config.families = v;
    }
    if let Some(v) = args.n {
        config.n_values = v;
    }
    if let Some(v) = args.gamma {
        config.gamma = *v.first().ok_or_else(|| Error::InvalidArgument("empty --gamma".into()))?;
        config.gamma_values = v;
    }
    if let Some(v) = args.k_min {
        config.k_min = *v.first().ok_or_else(|| Error::InvalidArgument("empty --kmin".into()))?;
        config.k_min_values = v;
    }
    if let Some(v) = args.nu {
        config.nu = *v.first().ok_or_else(|| Error::InvalidArgument("empty --nu".into()))?;
        config.nu_values = v;
    }
    if args.k_max.is_some() {
        config.k_max = args.k_max;
    }
    if let Some(v) = args.mean_degree {
        config.mean_degree = v;
    }
    if args.hubs.is_some() {
        config.hubs = args.hubs;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.realizations {
        config.realizations = v;
    }
    if let Some(v) = args.pairs {
        config.pairs = v.parse()?;
    }
    if args.out.is_some() {
        config.out = args.out;
    }
    if let Some(v) = args.format {
        config.format = v;
    }
    if args.graph_file.is_some() {
        config.graph_file = args.graph_file;
    }

    let result = experiments::run(&config)?;
    let mut out = output(config.out.as_deref())?;
    experiments::write_output(&result, config.format, &mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct IngestSummary {
    nodes: usize,
    edges: usize,
    dropped_self_loops: usize,
    dropped_duplicates: usize,
    components: usize,
    giant_size: usize,
    written_nodes: usize,
}

fn ingest(args: IngestArgs) -> Result<()> {
    let list = read_edge_list(BufReader::new(open_file(&args.graph_file)?))?;
    if list.graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (_, sizes) = connected_components(&list.graph);
    let (graph, original) = if args.giant {
        let giant = giant_component(&list.graph)?;
        let original: Vec<u64> = giant.new_to_old.iter().map(|&u| list.original_ids[u as usize]).collect();
        (giant.graph, original)
    } else {
        (list.graph.clone(), list.original_ids.clone())
    };
    let summary = IngestSummary {
        nodes: list.graph.node_count(),
        edges: list.graph.edge_count(),
        dropped_self_loops: list.dropped.self_loops,
        dropped_duplicates: list.dropped.duplicates,
        components: sizes.len(),
        giant_size: sizes.iter().copied().max().unwrap_or(0),
        written_nodes: graph.node_count(),
    };
    if let Some(path) = &args.out {
        let mut w = BufWriter::new(create_file(path)?);
        write_edge_list(&graph, &mut w)?;
        w.flush()?;
    }
    if let Some(path) = &args.mapping {
        let mut w = BufWriter::new(create_file(path)?);
        write_id_mapping(&original, &mut w)?;
        w.flush()?;
    }
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}
