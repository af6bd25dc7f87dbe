//! Batch experiments: multi-instance tables, size sweeps with power-law fits
//! and achievable-area sketches, plus their CSV/JSON output.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allocation::{
    analytic_rc, write_design_points, DesignPoint, Designer, Provenance, Scheme,
};
use crate::centrality::effective_betweenness;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::paths::{greedy_minmax, PathPool, PathSet, PoolConfig};
use crate::routing::{RoutingKind, RoutingModel};
use crate::sim::{find_rc, probe_seed, SweepConfig};
use crate::topology::TopologySpec;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "NETDESIGN_WORKERS";

/// Sizes the global worker pool from `explicit`, else from
/// [`WORKERS_ENV`], else leaves the default. Returns the count in effect.
pub fn init_worker_pool(explicit: Option<usize>) -> Result<usize> {
    let requested = match explicit {
        Some(n) => Some(n),
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                Error::InvalidArgument(format!("{WORKERS_ENV}={v:?} is not a worker count"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = requested {
        if n == 0 {
            return Err(Error::InvalidArgument("worker count must be >= 1".into()));
        }
        // a pool that is already running keeps its size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(rayon::current_num_threads())
}

/// Which critical rate a table evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Simulated,
    Both,
}

impl Mode {
    fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    fn simulated(self) -> bool {
        matches!(self, Mode::Simulated | Mode::Both)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Simulated => "simulated",
            Mode::Both => "both",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "simulated" => Ok(Mode::Simulated),
            "both" => Ok(Mode::Both),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

/// What to run: every topology × instance × scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub topologies: Vec<TopologySpec>,
    pub instances: usize,
    pub schemes: Vec<Scheme>,
    pub mode: Mode,
    pub master_seed: u64,
    /// Critical-rate search used in simulated mode; its seed is replaced
    /// per instance and scheme.
    pub sweep: SweepConfig,
}

impl ExperimentPlan {
    /// Analytic plan with master seed 0.
    pub fn new(topologies: Vec<TopologySpec>, instances: usize, schemes: Vec<Scheme>) -> Self {
        Self {
            topologies,
            instances,
            schemes,
            mode: Mode::Analytic,
            master_seed: 0,
            sweep: SweepConfig::new(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 {
            return Err(Error::Experiment("instance count must be >= 1".into()));
        }
        if self.topologies.is_empty() {
            return Err(Error::Experiment("plan has no topologies".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Experiment("plan has no schemes".into()));
        }
        Ok(())
    }

    /// Seed of instance `index`; the same for every topology in the plan.
    pub fn instance_seed(&self, index: usize) -> u64 {
        probe_seed(self.master_seed, index as u32)
    }
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            sd,
            count: values.len(),
        })
    }
}

/// One scheme evaluated on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub topology: String,
    pub scheme: Scheme,
    pub instance: usize,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub c_max: f64,
    pub theorem_bound: f64,
    pub analytic_rc: Option<f64>,
    pub simulated_rc: Option<f64>,
    /// The simulated search reached its rate cap without congestion.
    pub unsaturated: bool,
}

/// Aggregate of one (topology, scheme) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub topology: String,
    pub nodes: usize,
    pub scheme: Scheme,
    pub analytic_rc: Option<Stat>,
    pub simulated_rc: Option<Stat>,
    pub c_max: Option<Stat>,
    pub theorem_bound: Option<Stat>,
    /// `(instance, message)` of every failed instance.
    pub failures: Vec<(usize, String)>,
    /// More than half of the instances failed; the statistics are absent.
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub plan: ExperimentPlan,
    pub cells: Vec<CellResult>,
    pub records: Vec<InstanceRecord>,
}

impl TableReport {
    pub fn cell(&self, topology: &str, scheme: Scheme) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.topology == topology && c.scheme == scheme)
    }

    pub fn failed_cells(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| c.failed)
    }
}

fn topology_label(spec: &TopologySpec) -> String {
    format!("{}-{}", spec.family(), spec.node_count())
}

/// Evaluates every scheme on one generated instance.
fn evaluate_instance(
    plan: &ExperimentPlan,
    spec: &TopologySpec,
    instance: usize,
) -> Vec<std::result::Result<InstanceRecord, String>> {
    let seed = plan.instance_seed(instance);
    let label = topology_label(spec);
    let net = match spec.generate(seed) {
        Ok(net) => net,
        Err(e) => return vec![Err(format!("generation: {e}")); plan.schemes.len()],
    };
    let designer = Designer::new(&net, label.clone(), Some(seed));
    plan.schemes
        .iter()
        .enumerate()
        .map(|(k, &scheme)| {
            let point = designer.design_point(scheme).map_err(|e| e.to_string())?;
            let mut record = InstanceRecord {
                topology: label.clone(),
                scheme,
                instance,
                seed,
                nodes: net.node_count(),
                edges: net.edge_count(),
                c_max: point.c_max,
                theorem_bound: point.theorem_bound,
                analytic_rc: plan.mode.analytic().then_some(point.r_c),
                simulated_rc: None,
                unsaturated: false,
            };
            if plan.mode.simulated() {
                let alloc = designer.allocation(scheme).map_err(|e| e.to_string())?;
                let model = RoutingModel::build(&net, scheme.routing);
                let mut sweep = plan.sweep;
                sweep.run.seed = probe_seed(seed, k as u32 + 1);
                let found = find_rc(&net, &model, &alloc, &sweep).map_err(|e| e.to_string())?;
                record.simulated_rc = Some(f64::from(found.rate));
                record.unsaturated = found.unsaturated;
            }
            Ok(record)
        })
        .collect()
}

/// Runs every cell of `plan`. Failed instances are recorded and left out of
/// the statistics; a cell with more than half of its instances failed is
/// marked failed.
pub fn run_table(plan: &ExperimentPlan) -> Result<TableReport> {
    plan.validate()?;
    let jobs: Vec<(usize, usize)> = (0..plan.topologies.len())
        .flat_map(|t| (0..plan.instances).map(move |i| (t, i)))
        .collect();
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(t, i)| evaluate_instance(plan, &plan.topologies[t], i))
        .collect();

    let mut records = Vec::new();
    let mut cells = Vec::new();
    for (t, spec) in plan.topologies.iter().enumerate() {
        for (k, &scheme) in plan.schemes.iter().enumerate() {
            let mut ok = Vec::new();
            let mut failures = Vec::new();
            for i in 0..plan.instances {
                match &outcomes[t * plan.instances + i][k] {
                    Ok(r) => ok.push(r.clone()),
                    Err(msg) => failures.push((i, msg.clone())),
                }
            }
            let failed = 2 * failures.len() > plan.instances;
            let stat = |f: &dyn Fn(&InstanceRecord) -> Option<f64>| {
                if failed {
                    None
                } else {
                    Stat::of(&ok.iter().filter_map(f).collect::<Vec<_>>())
                }
            };
            cells.push(CellResult {
                topology: topology_label(spec),
                nodes: spec.node_count(),
                scheme,
                analytic_rc: stat(&|r| r.analytic_rc),
                simulated_rc: stat(&|r| r.simulated_rc),
                c_max: stat(&|r| Some(r.c_max)),
                theorem_bound: stat(&|r| Some(r.theorem_bound)),
                failures,
                failed,
            });
            records.extend(ok);
        }
    }
    Ok(TableReport {
        plan: plan.clone(),
        cells,
        records,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Scheme-by-topology pivot of one statistic, like the printed tables.
fn write_pivot(
    report: &TableReport,
    dir: &Path,
    name: &str,
    pick: impl Fn(&CellResult) -> Option<Stat>,
) -> Result<()> {
    let topologies: Vec<String> = report.plan.topologies.iter().map(topology_label).collect();
    let mut w = csv::Writer::from_writer(create(dir, name)?);
    let mut header = vec!["scheme".to_string()];
    header.extend(topologies.iter().cloned());
    w.write_record(&header)?;
    for &scheme in &report.plan.schemes {
        let mut row = vec![scheme.to_string()];
        for t in &topologies {
            let value = report.cell(t, scheme).and_then(&pick).map(|s| s.mean);
            row.push(fmt_opt(value));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a, P: Serialize> {
    tool: &'static str,
    version: &'static str,
    kind: &'a str,
    plan: &'a P,
    instance_seeds: Vec<u64>,
    files: Vec<&'a str>,
}

fn write_manifest<P: Serialize>(
    dir: &Path,
    kind: &str,
    plan: &P,
    seeds: Vec<u64>,
    files: Vec<&str>,
) -> Result<()> {
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        kind,
        plan,
        instance_seeds: seeds,
        files,
    };
    let mut out = create(dir, "manifest.json")?;
    serde_json::to_writer_pretty(&mut out, &manifest)
        .map_err(|e| Error::Experiment(format!("manifest: {e}")))?;
    writeln!(out)?;
    Ok(())
}

/// Writes `cells.csv`, `instances.csv`, pivoted `rc_analytic.csv`,
/// `rc_simulated.csv`, `c_max.csv` (as requested by the mode) and
/// `manifest.json` into `dir`.
pub fn write_table(report: &TableReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_writer(create(dir, "cells.csv")?);
    w.write_record([
        "topology",
        "N",
        "scheme",
        "instances_ok",
        "instances_failed",
        "analytic_rc_mean",
        "analytic_rc_sd",
        "simulated_rc_mean",
        "simulated_rc_sd",
        "c_max_mean",
        "c_max_sd",
        "theorem_bound_mean",
    ])?;
    for c in &report.cells {
        let ok = report.plan.instances - c.failures.len();
        w.write_record(&[
            c.topology.clone(),
            c.nodes.to_string(),
            c.scheme.to_string(),
            ok.to_string(),
            c.failures.len().to_string(),
            fmt_opt(c.analytic_rc.map(|s| s.mean)),
            fmt_opt(c.analytic_rc.map(|s| s.sd)),
            fmt_opt(c.simulated_rc.map(|s| s.mean)),
            fmt_opt(c.simulated_rc.map(|s| s.sd)),
            fmt_opt(c.c_max.map(|s| s.mean)),
            fmt_opt(c.c_max.map(|s| s.sd)),
            fmt_opt(c.theorem_bound.map(|s| s.mean)),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(create(dir, "instances.csv")?);
    w.write_record([
        "topology",
        "scheme",
        "instance",
        "seed",
        "N",
        "M",
        "c_max",
        "theorem_bound",
        "analytic_rc",
        "simulated_rc",
        "unsaturated",
    ])?;
    for r in &report.records {
        w.write_record(&[
            r.topology.clone(),
            r.scheme.to_string(),
            r.instance.to_string(),
            r.seed.to_string(),
            r.nodes.to_string(),
            r.edges.to_string(),
            r.c_max.to_string(),
            r.theorem_bound.to_string(),
            fmt_opt(r.analytic_rc),
            fmt_opt(r.simulated_rc),
            r.unsaturated.to_string(),
        ])?;
    }
    w.flush()?;

    let mut files = vec!["cells.csv", "instances.csv", "c_max.csv"];
    write_pivot(report, dir, "c_max.csv", |c| c.c_max)?;
    if report.plan.mode.analytic() {
        write_pivot(report, dir, "rc_analytic.csv", |c| c.analytic_rc)?;
        files.push("rc_analytic.csv");
    }
    if report.plan.mode.simulated() {
        write_pivot(report, dir, "rc_simulated.csv", |c| c.simulated_rc)?;
        files.push("rc_simulated.csv");
    }
    let seeds = (0..report.plan.instances)
        .map(|i| report.plan.instance_seed(i))
        .collect();
    write_manifest(dir, "table", &report.plan, seeds, files)
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLaw> {
    let points: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::Experiment(format!(
            "power-law fit needs two positive points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Experiment(
            "power-law fit needs two distinct sizes".into(),
        ));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (points
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(PowerLaw {
        exponent,
        prefactor: intercept.exp(),
        residual,
    })
}

/// Quantity tracked across sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    BMax,
    BEfrMax,
    Rc { scheme: Scheme },
    CMax { scheme: Scheme },
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::BMax => f.write_str("b_max"),
            Quantity::BEfrMax => f.write_str("b_efr_max"),
            Quantity::Rc { scheme } => write!(f, "r_c[{scheme}]"),
            Quantity::CMax { scheme } => write!(f, "c_max[{scheme}]"),
        }
    }
}

/// Power-law fit of one quantity over the sizes of one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub family: String,
    pub quantity: Quantity,
    pub sizes: Vec<usize>,
    /// Instance mean per size.
    pub means: Vec<f64>,
    pub exponent: f64,
    pub prefactor: f64,
    pub residual: f64,
}

/// Per-instance measurements of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSample {
    pub family: String,
    pub nodes: usize,
    pub instance: usize,
    pub seed: u64,
    pub quantity: Quantity,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub plan: ExperimentPlan,
    pub fits: Vec<ScalingFit>,
    pub samples: Vec<ScalingSample>,
    pub failures: Vec<(String, usize, String)>,
}

impl ScalingReport {
    pub fn fit(&self, family: &str, quantity: Quantity) -> Option<&ScalingFit> {
        self.fits
            .iter()
            .find(|f| f.family == family && f.quantity == quantity)
    }
}

fn scaling_quantities(schemes: &[Scheme]) -> Vec<Quantity> {
    let mut q = vec![Quantity::BMax, Quantity::BEfrMax];
    for &scheme in schemes {
        q.push(Quantity::Rc { scheme });
        q.push(Quantity::CMax { scheme });
    }
    q
}

fn measure_scaling(net: &Network, schemes: &[Scheme], seed: u64) -> Result<Vec<(Quantity, f64)>> {
    let designer = Designer::new(net, "sweep", Some(seed));
    let mut out = vec![
        (
            Quantity::BMax,
            designer.centrality(RoutingKind::Spr).b_max(),
        ),
        (
            Quantity::BEfrMax,
            designer.centrality(RoutingKind::Efr).b_max(),
        ),
    ];
    for &scheme in schemes {
        let p = designer.design_point(scheme)?;
        out.push((Quantity::Rc { scheme }, p.r_c));
        out.push((Quantity::CMax { scheme }, p.c_max));
    }
    Ok(out)
}

/// Size sweep: for each family in the plan (sizes strictly increasing, at
/// least four), instance means of `B_max`, `B^EFR_max` and of `R_c` and
/// `C_max` per scheme, each fitted as a power of `N`.
pub fn run_scaling(plan: &ExperimentPlan) -> Result<ScalingReport> {
    plan.validate()?;
    let mut families: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (t, spec) in plan.topologies.iter().enumerate() {
        families
            .entry(spec.family().to_string())
            .or_default()
            .push(t);
    }
    for (family, idx) in &families {
        let sizes: Vec<usize> = idx
            .iter()
            .map(|&t| plan.topologies[t].node_count())
            .collect();
        if sizes.len() < 4 {
            return Err(Error::Experiment(format!(
                "{family}: scaling needs at least 4 sizes, got {}",
                sizes.len()
            )));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Experiment(format!(
                "{family}: sizes must be strictly increasing, got {sizes:?}"
            )));
        }
    }

    let jobs: Vec<(usize, usize)> = (0..plan.topologies.len())
        .flat_map(|t| (0..plan.instances).map(move |i| (t, i)))
        .collect();
    let outcomes: Vec<Result<Vec<(Quantity, f64)>>> = jobs
        .par_iter()
        .map(|&(t, i)| {
            let net = plan.topologies[t].generate(plan.instance_seed(i))?;
            measure_scaling(&net, &plan.schemes, plan.instance_seed(i))
        })
        .collect();

    let quantities = scaling_quantities(&plan.schemes);
    let mut samples = Vec::new();
    let mut failures = Vec::new();
    let mut fits = Vec::new();
    for (family, idx) in &families {
        let mut sizes = Vec::new();
        let mut sums: Vec<Vec<f64>> = Vec::new();
        for &t in idx {
            let n = plan.topologies[t].node_count();
            let mut per_q = vec![Vec::new(); quantities.len()];
            for i in 0..plan.instances {
                match &outcomes[t * plan.instances + i] {
                    Ok(values) => {
                        for (k, &(q, v)) in values.iter().enumerate() {
                            per_q[k].push(v);
                            samples.push(ScalingSample {
                                family: family.clone(),
                                nodes: n,
                                instance: i,
                                seed: plan.instance_seed(i),
                                quantity: q,
                                value: v,
                            });
                        }
                    }
                    Err(e) => failures.push((family.clone(), n, e.to_string())),
                }
            }
            if per_q[0].is_empty() {
                continue;
            }
            sizes.push(n);
            sums.push(
                per_q
                    .iter()
                    .map(|v| v.iter().sum::<f64>() / v.len() as f64)
                    .collect(),
            );
        }
        if sizes.len() <= 1 {
            return Err(Error::Experiment(format!(
                "{family}: only {} size(s) produced instances; no fit possible",
                sizes.len()
            )));
        }
        let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
        for (k, &quantity) in quantities.iter().enumerate() {
            let means: Vec<f64> = sums.iter().map(|row| row[k]).collect();
            let law = fit_power_law(&xs, &means)?;
            fits.push(ScalingFit {
                family: family.clone(),
                quantity,
                sizes: sizes.clone(),
                means,
                exponent: law.exponent,
                prefactor: law.prefactor,
                residual: law.residual,
            });
        }
    }
    Ok(ScalingReport {
        plan: plan.clone(),
        fits,
        samples,
        failures,
    })
}

/// Writes `fits.csv`, `means.csv` (one row per family, size and quantity),
/// `samples.csv` and `manifest.json` into `dir`.
pub fn write_scaling(report: &ScalingReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_writer(create(dir, "fits.csv")?);
    w.write_record(["family", "quantity", "exponent", "prefactor", "residual"])?;
    for f in &report.fits {
        w.write_record(&[
            f.family.clone(),
            f.quantity.to_string(),
            f.exponent.to_string(),
            f.prefactor.to_string(),
            f.residual.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(create(dir, "means.csv")?);
    w.write_record(["family", "N", "quantity", "mean"])?;
    for f in &report.fits {
        for (n, m) in f.sizes.iter().zip(&f.means) {
            w.write_record(&[
                f.family.clone(),
                n.to_string(),
                f.quantity.to_string(),
                m.to_string(),
            ])?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(create(dir, "samples.csv")?);
    w.write_record(["family", "N", "instance", "seed", "quantity", "value"])?;
    for s in &report.samples {
        w.write_record(&[
            s.family.clone(),
            s.nodes.to_string(),
            s.instance.to_string(),
            s.seed.to_string(),
            s.quantity.to_string(),
            s.value.to_string(),
        ])?;
    }
    w.flush()?;
    let seeds = (0..report.plan.instances)
        .map(|i| report.plan.instance_seed(i))
        .collect();
    write_manifest(
        dir,
        "scaling",
        &report.plan,
        seeds,
        vec!["fits.csv", "means.csv", "samples.csv"],
    )
}

/// Min-max path set found by [`greedy_minmax`] over a pool built with
/// `config`, starting from the first SPR candidate of every pair.
pub fn greedy_paths(net: &Network, config: PoolConfig) -> Result<PathSet> {
    let pool = PathPool::build(net, config)?;
    let init = PathSet::first_candidates(net, RoutingKind::Spr);
    Ok(greedy_minmax(net, &pool, &init)?.paths)
}

/// Design point of uniform bandwidth with packets on the fixed `paths`.
pub fn greedy_point(net: &Network, topology: &str, paths: &PathSet) -> Result<DesignPoint> {
    let designer = Designer::new(net, topology, None);
    let model = RoutingModel::from_path_set(net, paths.clone())?;
    let centrality = effective_betweenness(net, &model)?;
    let alloc = designer.allocation(Scheme::UC_SPR)?;
    Ok(DesignPoint {
        c_max: alloc.c_max(),
        r_c: analytic_rc(net, &alloc, &centrality)?,
        theorem_bound: designer.theorem_bound(),
        provenance: Provenance {
            topology: topology.to_string(),
            routing: "greedy".into(),
            scheme: "C".into(),
            seed: None,
            nodes: net.node_count(),
            edges: net.edge_count(),
        },
    })
}

/// Design points of `schemes` on `net`, the greedy point `C` when a
/// min-max path set is given, and the limiting markers `A` and `B`.
pub fn emit_achievable_sketch(
    net: &Network,
    topology: &str,
    schemes: &[Scheme],
    greedy: Option<&PathSet>,
) -> Result<Vec<DesignPoint>> {
    let designer = Designer::new(net, topology, None);
    let mut points = schemes
        .iter()
        .map(|&s| designer.design_point(s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(paths) = greedy {
        points.push(greedy_point(net, topology, paths)?);
    }
    points.extend(designer.limiting_points());
    Ok(points)
}

/// Writes sketch points as a design-point CSV.
pub fn write_sketch<W: Write>(points: &[DesignPoint], out: W) -> Result<()> {
    write_design_points(points, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::cycle;
    use crate::topology::Family;

    #[test]
    fn stat_mean_sd() {
        let s = Stat::of(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.sd, 1.0);
        assert!(Stat::of(&[]).is_none());
    }

    #[test]
    fn power_law_recovers_exponent() {
        let xs = [100.0, 200.0, 400.0, 800.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-12);
        assert!(fit_power_law(&[10.0], &[1.0]).is_err());
    }

    #[test]
    fn table_is_deterministic_and_seeded_by_counter() {
        let plan = ExperimentPlan::new(
            vec![Family::Ba.default_spec(60), Family::Ws.default_spec(60)],
            3,
            Scheme::REFERENCE.to_vec(),
        );
        let a = run_table(&plan).unwrap();
        let b = run_table(&plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 8);
        assert_eq!(a.records.len(), 24);
        assert_ne!(plan.instance_seed(0), plan.instance_seed(1));
        for r in &a.records {
            assert!(r.analytic_rc.unwrap() <= r.theorem_bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn failing_cells_are_marked() {
        use crate::topology::ErConnectivity;
        let plan = ExperimentPlan::new(
            vec![TopologySpec::Er {
                n: 200,
                edges: 150,
                connect: ErConnectivity::Reject { max_attempts: 2 },
            }],
            2,
            vec![Scheme::UC_SPR],
        );
        let report = run_table(&plan).unwrap();
        assert!(report.cells[0].failed);
        assert_eq!(report.cells[0].failures.len(), 2);
        assert!(report.cells[0].analytic_rc.is_none());
    }

    #[test]
    fn scaling_rejects_bad_sizes() {
        let mut plan = ExperimentPlan::new(
            [100, 200, 300]
                .iter()
                .map(|&n| Family::Er.default_spec(n))
                .collect(),
            1,
            vec![Scheme::BC_SPR],
        );
        assert!(run_scaling(&plan).is_err());
        plan.topologies = [100, 300, 200, 400]
            .iter()
            .map(|&n| Family::Er.default_spec(n))
            .collect();
        assert!(run_scaling(&plan).is_err());
    }

    #[test]
    fn ring_sketch_collapses() {
        let ring = cycle(9);
        let paths = greedy_paths(&ring, PoolConfig::default()).unwrap();
        let points =
            emit_achievable_sketch(&ring, "ring", &Scheme::REFERENCE, Some(&paths)).unwrap();
        assert_eq!(points.len(), 7);
        let first = &points[0];
        for p in &points[..5] {
            assert!((p.c_max - first.c_max).abs() < 1e-12);
            assert!((p.r_c - first.r_c).abs() < 1e-9);
        }
        assert_eq!(points[5].c_max, 1.0);
        assert_eq!(points[6].c_max, 9.0);
    }
}
