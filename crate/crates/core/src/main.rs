use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use netdesign::experiment::{
    emit_achievable_sketch, greedy_paths, init_worker_pool, run_scaling, run_table, write_scaling,
    write_sketch, write_table, ExperimentPlan, Mode, WORKERS_ENV,
};
use netdesign::graph::{metrics, read_edge_list, write_edge_list};
use netdesign::paths::{PathSet, PoolConfig};
use netdesign::sim::{find_rc, simulate, write_theta_csv, SimulationConfig, SweepConfig};
use netdesign::topology::{ErConnectivity, Family, TopologySpec};
use netdesign::{Designer, Network, RoutingKind, RoutingModel, Scheme};

#[derive(Parser)]
#[command(
    name = "netdesign",
    version,
    about = "Capacity design experiments on synthetic networks"
)]
struct Cli {
    /// TOML file whose `[<command>]` table supplies default flag values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: $NETDESIGN_WORKERS, else all cores).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one topology as an edge list.
    #[command(args_override_self = true)]
    Gen(GenArgs),
    /// Per-edge betweenness of a routing as CSV.
    #[command(args_override_self = true)]
    Betweenness(BetweennessArgs),
    /// Design points of one graph.
    #[command(args_override_self = true)]
    Design(DesignArgs),
    /// Reproduce a table of critical rates and maximal capacities.
    #[command(args_override_self = true)]
    Table(TableArgs),
    /// Size sweep with power-law fits.
    #[command(args_override_self = true)]
    Scaling(ScalingArgs),
    /// Packet simulation on one graph.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Achievable-area coordinates of one graph.
    #[command(args_override_self = true)]
    Sketch(SketchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// BA links per new node.
    #[arg(long)]
    m: Option<usize>,
    /// BA attachment offset added to every degree.
    #[arg(long)]
    attractiveness: Option<usize>,
    /// ER target edge count or PA total edge count.
    #[arg(long)]
    edges: Option<usize>,
    /// ER: redraw whole graphs (up to this many) instead of joining components.
    #[arg(long)]
    reject: Option<usize>,
    /// WS ring degree.
    #[arg(long)]
    k: Option<usize>,
    /// WS rewired fraction.
    #[arg(long)]
    rewire: Option<f64>,
    /// Output edge list; a `.meta` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BetweennessArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "spr")]
    routing: RoutingKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "uc-spr,uc-efr,bc-spr,ebc-efr"
    )]
    schemes: Vec<Scheme>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_delimiter = ',', default_value = "ba,pa,hot,er,ws")]
    families: Vec<Family>,
    #[arg(long, default_value_t = 1200)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "uc-spr,uc-efr,bc-spr,ebc-efr"
    )]
    schemes: Vec<Scheme>,
    #[arg(long, default_value = "analytic")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long, value_delimiter = ',', default_value = "ba")]
    family: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_value = "400,800,1600,3200")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    instances: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "uc-spr,uc-efr,bc-spr,ebc-efr"
    )]
    schemes: Vec<Scheme>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone, Copy)]
struct SweepArgs {
    /// Order-parameter threshold of the critical-rate search.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 2000)]
    steps: u32,
    #[arg(long, default_value_t = 1000)]
    transient: u32,
    #[arg(long, default_value_t = 100)]
    window: u32,
    #[arg(long, default_value_t = 1 << 16)]
    max_rate: u32,
}

impl SweepArgs {
    fn sweep(&self, seed: u64) -> SweepConfig {
        let mut sweep = SweepConfig::new(seed);
        sweep.epsilon = self.epsilon;
        sweep.max_rate = self.max_rate;
        sweep.run.total_steps = self.steps;
        sweep.run.transient_steps = self.transient;
        sweep.run.window = self.window;
        sweep
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "uc-spr")]
    scheme: Scheme,
    /// Fixed path set (`u v : n0 ... nk` lines) instead of the scheme's routing.
    #[arg(long)]
    paths: Option<PathBuf>,
    /// Search for the critical rate instead of running one rate.
    #[arg(long)]
    find_rc: bool,
    #[arg(long, required_unless_present = "find_rc")]
    rate: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Write the `step,theta` trace of a single run here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SketchArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "uc-spr,uc-efr,bc-spr,ebc-efr"
    )]
    schemes: Vec<Scheme>,
    /// Skip the greedy point C.
    #[arg(long)]
    no_greedy: bool,
    /// Loopless k-shortest paths added to the greedy pool per pair.
    #[arg(long, default_value_t = 4)]
    yen_k: usize,
    /// Cache file for the greedy path set: read if present, else written.
    #[arg(long)]
    paths: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

const COMMANDS: [&str; 7] = [
    "gen",
    "betweenness",
    "design",
    "table",
    "scaling",
    "simulate",
    "sketch",
];

/// Splices flags from the config file's `[<command>]` table in front of
/// the command-line flags, so explicit flags win.
fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let config = args
        .iter()
        .position(|a| a == "--config")
        .and_then(|i| args.get(i + 1).cloned())
        .or_else(|| {
            args.iter()
                .find_map(|a| a.strip_prefix("--config=").map(str::to_string))
        });
    let Some(config) = config else {
        return Ok(args);
    };
    let Some(cmd_pos) = args.iter().position(|a| COMMANDS.contains(&a.as_str())) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&config).with_context(|| format!("reading {config}"))?;
    let table: toml::Table = text.parse().with_context(|| format!("parsing {config}"))?;
    let Some(section) = table.get(&args[cmd_pos]) else {
        return Ok(args);
    };
    let section = section
        .as_table()
        .with_context(|| format!("[{}] in {config} is not a table", args[cmd_pos]))?;
    let explicit: Vec<&str> = args[cmd_pos + 1..]
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let mut injected = Vec::new();
    for (key, value) in section {
        let name = key.replace('_', "-");
        if explicit.contains(&name.as_str()) {
            continue;
        }
        let flag = format!("--{name}");
        match value {
            toml::Value::Boolean(true) => injected.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar).collect::<Result<_>>()?;
                injected.push(flag);
                injected.push(joined.join(","));
            }
            other => {
                injected.push(flag);
                injected.push(scalar(other)?);
            }
        }
    }
    let mut out = args[..=cmd_pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[cmd_pos + 1..]);
    Ok(out)
}

fn scalar(value: &toml::Value) -> Result<String> {
    Ok(match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        other => bail!("unsupported config value {other}"),
    })
}

fn load_graph(path: &Path) -> Result<Network> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            ))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn gen_spec(a: &GenArgs) -> Result<TopologySpec> {
    let mut spec = a.family.default_spec(a.n);
    match &mut spec {
        TopologySpec::Ba {
            m, attractiveness, ..
        } => {
            *m = a.m.unwrap_or(*m);
            *attractiveness = a.attractiveness.unwrap_or(*attractiveness);
        }
        TopologySpec::Er { edges, connect, .. } => {
            *edges = a.edges.unwrap_or(*edges);
            if let Some(max_attempts) = a.reject {
                *connect = ErConnectivity::Reject { max_attempts };
            }
        }
        TopologySpec::Ws { k, rewire, .. } => {
            *k = a.k.unwrap_or(*k);
            *rewire = a.rewire.unwrap_or(*rewire);
        }
        TopologySpec::Pa { edges, .. } => *edges = a.edges.unwrap_or(*edges),
        TopologySpec::Hot { .. } => {}
    }
    Ok(spec)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let spec = gen_spec(&a)?;
    let net = spec.generate(a.seed)?;
    let meta = spec.describe(a.seed);
    write_edge_list(&net, output(a.out.as_deref())?, std::slice::from_ref(&meta))?;
    if let Some(out) = &a.out {
        let mut sidecar = out.clone().into_os_string();
        sidecar.push(".meta");
        fs::write(&sidecar, format!("{meta}\n"))?;
        let m = metrics(&net)?;
        eprintln!(
            "{}: N={} M={} diameter={} L={:.4}",
            out.display(),
            net.node_count(),
            net.edge_count(),
            m.diameter,
            m.average_path_length
        );
    }
    Ok(())
}

fn cmd_betweenness(a: BetweennessArgs) -> Result<()> {
    let net = load_graph(&a.graph)?;
    let b = netdesign::betweenness(&net, a.routing);
    b.write_csv(&net, output(a.out.as_deref())?)?;
    Ok(())
}

fn cmd_design(a: DesignArgs) -> Result<()> {
    let net = load_graph(&a.graph)?;
    let label = a.graph.file_stem().unwrap_or_default().to_string_lossy();
    let designer = Designer::new(&net, label, None);
    let points = a
        .schemes
        .iter()
        .map(|&s| designer.design_point(s))
        .collect::<netdesign::Result<Vec<_>>>()?;
    netdesign::allocation::write_design_points(&points, output(a.out.as_deref())?)?;
    Ok(())
}

fn cmd_table(a: TableArgs) -> Result<()> {
    let mut plan = ExperimentPlan::new(
        a.families.iter().map(|f| f.default_spec(a.n)).collect(),
        a.instances,
        a.schemes,
    );
    plan.mode = a.mode;
    plan.master_seed = a.seed;
    plan.sweep = a.sweep.sweep(a.seed);
    let report = run_table(&plan)?;
    for cell in &report.cells {
        for (i, msg) in &cell.failures {
            eprintln!(
                "warning: {} {} instance {i}: {msg}",
                cell.topology, cell.scheme
            );
        }
    }
    write_table(&report, &a.out)?;
    println!(
        "{:<10} {:<8} {:>12} {:>12} {:>10}",
        "topology", "scheme", "r_c", "r_c(sim)", "c_max"
    );
    for c in &report.cells {
        let show = |s: Option<netdesign::experiment::Stat>| {
            s.map(|s| format!("{:.1}±{:.1}", s.mean, s.sd))
                .unwrap_or_else(|| "-".into())
        };
        println!(
            "{:<10} {:<8} {:>12} {:>12} {:>10}",
            c.topology,
            c.scheme.to_string(),
            show(c.analytic_rc),
            show(c.simulated_rc),
            c.c_max
                .map(|s| format!("{:.2}", s.mean))
                .unwrap_or_else(|| "-".into())
        );
    }
    let failed = report.failed_cells().count();
    if failed > 0 {
        bail!("{failed} cell(s) failed on more than half of their instances");
    }
    Ok(())
}

fn cmd_scaling(a: ScalingArgs) -> Result<()> {
    let topologies = a
        .family
        .iter()
        .flat_map(|f| a.sizes.iter().map(move |&n| f.default_spec(n)))
        .collect();
    let mut plan = ExperimentPlan::new(topologies, a.instances, a.schemes);
    plan.master_seed = a.seed;
    let report = run_scaling(&plan)?;
    for (family, n, msg) in &report.failures {
        eprintln!("warning: {family} N={n}: {msg}");
    }
    write_scaling(&report, &a.out)?;
    for fit in &report.fits {
        println!(
            "{:<4} {:<18} exponent {:.3} (rms {:.3})",
            fit.family,
            fit.quantity.to_string(),
            fit.exponent,
            fit.residual
        );
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let net = load_graph(&a.graph)?;
    let designer = Designer::new(&net, "graph", Some(a.seed));
    let alloc = designer.allocation(a.scheme)?;
    let model = match &a.paths {
        Some(p) => {
            let file = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            RoutingModel::from_path_set(&net, PathSet::read(&net, BufReader::new(file))?)?
        }
        None => RoutingModel::build(&net, a.scheme.routing),
    };
    let sweep = a.sweep.sweep(a.seed);
    let analytic = designer.design_point(a.scheme)?.r_c;
    let summary = if a.find_rc {
        let found = find_rc(&net, &model, &alloc, &sweep)?;
        serde_json::json!({
            "graph": a.graph.display().to_string(),
            "scheme": a.scheme.to_string(),
            "routing": model.label(),
            "config": sweep,
            "analytic_rc": analytic,
            "simulated_rc": found.rate,
            "unsaturated": found.unsaturated,
            "probes": found.probes,
            "conservation_held": found.conservation_held,
        })
    } else {
        let cfg = SimulationConfig {
            rate: a.rate.expect("clap requires --rate"),
            seed: a.seed,
            ..sweep.run
        };
        let est = simulate(&net, &model, &alloc, &cfg)?;
        if let Some(trace) = &a.trace {
            write_theta_csv(&est, output(Some(trace))?)?;
        }
        serde_json::json!({
            "graph": a.graph.display().to_string(),
            "scheme": a.scheme.to_string(),
            "routing": model.label(),
            "config": cfg,
            "analytic_rc": analytic,
            "eta": est.eta,
            "raw_eta": est.raw_eta,
            "injected": est.injected,
            "delivered": est.delivered,
            "in_flight": est.in_flight,
            "capped": est.capped,
            "conservation_held": est.conservation_held,
        })
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_sketch(a: SketchArgs) -> Result<()> {
    let net = load_graph(&a.graph)?;
    let label = a
        .graph
        .file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .to_string();
    let greedy = if a.no_greedy {
        None
    } else {
        match &a.paths {
            Some(p) if p.exists() => {
                let file = File::open(p)?;
                Some(PathSet::read(&net, BufReader::new(file))?)
            }
            cache => {
                let config = PoolConfig {
                    yen_k: a.yen_k,
                    ..PoolConfig::default()
                };
                let paths = greedy_paths(&net, config)?;
                if let Some(p) = cache {
                    paths.write(output(Some(p))?)?;
                }
                Some(paths)
            }
        }
    };
    let points = emit_achievable_sketch(&net, &label, &a.schemes, greedy.as_ref())?;
    write_sketch(&points, output(a.out.as_deref())?)?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse_from(expand_config(std::env::args().collect())?);
    init_worker_pool(cli.workers)?;
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Betweenness(a) => cmd_betweenness(a),
        Command::Design(a) => cmd_design(a),
        Command::Table(a) => cmd_table(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sketch(a) => cmd_sketch(a),
    }
}
