//! Edge betweenness and routing-specific effective betweenness.
//!
//! Values use the ordered-pair convention: an edge that is the only route
//! between its own endpoints collects 2 from that pair (one per direction),
//! and the values over all edges sum to `N(N-1)` times the mean candidate
//! path length.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::paths::all_simple_paths;
use crate::routing::{search, Direction, RoutingKind, RoutingModel};

/// Largest network the path-enumerating oracle accepts.
pub const ORACLE_MAX_NODES: usize = 12;

/// Sources per parallel work unit. Partial sums are added in chunk order so
/// results do not depend on the thread count.
const SOURCE_CHUNK: usize = 16;

/// Per-edge (effective) betweenness for one routing.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCentrality {
    values: Vec<f64>,
    routing: String,
    fingerprint: u64,
    node_count: usize,
}

impl EdgeCentrality {
    fn new(net: &Network, routing: &str, values: Vec<f64>) -> Self {
        Self {
            values,
            routing: routing.to_string(),
            fingerprint: net.fingerprint(),
            node_count: net.node_count(),
        }
    }

    /// Wraps externally computed per-edge values.
    pub fn from_values(net: &Network, routing: &str, values: Vec<f64>) -> Result<Self> {
        if values.len() != net.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} edges",
                values.len(),
                net.edge_count()
            )));
        }
        Ok(Self::new(net, routing, values))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, edge: usize) -> f64 {
        self.values[edge]
    }

    /// Label of the routing these values belong to (`spr`, `efr` or
    /// `explicit`).
    pub fn routing(&self) -> &str {
        &self.routing
    }

    pub fn b_max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (e, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = e;
            }
        }
        best
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Mean candidate-path hop length implied by the values,
    /// `sum / (N(N-1))`.
    pub fn implied_path_length(&self) -> f64 {
        let n = self.node_count as f64;
        self.total() / (n * (n - 1.0))
    }

    pub fn check_network(&self, net: &Network) -> Result<()> {
        if self.fingerprint == net.fingerprint() {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    /// CSV with header `edge_id,u,v,betweenness`.
    pub fn write_csv<W: Write>(&self, net: &Network, out: W) -> Result<()> {
        self.check_network(net)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["edge_id", "u", "v", "betweenness"])?;
        for (id, &(u, v)) in net.edges().iter().enumerate() {
            w.write_record(&[
                id.to_string(),
                u.to_string(),
                v.to_string(),
                self.values[id].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Classical edge betweenness (all shortest paths).
pub fn edge_betweenness(net: &Network) -> EdgeCentrality {
    betweenness(net, RoutingKind::Spr)
}

/// Effective betweenness of a cost-minimising routing, by dependency
/// accumulation over one search per source.
pub fn betweenness(net: &Network, kind: RoutingKind) -> EdgeCentrality {
    let n = net.node_count();
    let m = net.edge_count();
    let weights = kind.hop_weights(net);
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; m];
            let mut delta = vec![0.0; n];
            for &s in chunk {
                accumulate_source(net, &weights, s, &mut acc, &mut delta);
            }
            acc
        })
        .collect();
    let mut values = vec![0.0; m];
    for part in partials {
        for (v, p) in values.iter_mut().zip(part) {
            *v += p;
        }
    }
    EdgeCentrality::new(net, kind.name(), values)
}

fn accumulate_source(net: &Network, weights: &[u64], s: usize, acc: &mut [f64], delta: &mut [f64]) {
    let found = search(net, s, weights, Direction::FromRoot);
    delta.iter_mut().for_each(|d| *d = 0.0);
    for &b in found.order.iter().rev() {
        if b == s {
            continue;
        }
        let coeff = (1.0 + delta[b]) / found.sigma[b];
        for adj in net.neighbors(b) {
            let a = adj.node;
            if found.cost[a] != u64::MAX && found.cost[a] + weights[a] == found.cost[b] {
                let c = found.sigma[a] * coeff;
                acc[adj.edge] += c;
                delta[a] += c;
            }
        }
    }
}

/// Effective betweenness of `model` on `net`. Explicit path sets yield their
/// occurrence counts.
pub fn effective_betweenness(net: &Network, model: &RoutingModel) -> Result<EdgeCentrality> {
    model.check_network(net)?;
    match model.kind() {
        Some(kind) => Ok(betweenness(net, kind)),
        None => {
            let paths = model.path_set().expect("explicit model");
            let values = paths.occupancy().iter().map(|&c| c as f64).collect();
            Ok(EdgeCentrality::new(net, "explicit", values))
        }
    }
}

/// Mean hop length of candidate paths over ordered pairs, each pair's
/// candidates weighted equally. Computed by forward propagation of average
/// hop counts, independently of the betweenness accumulation.
pub fn mean_path_length(net: &Network, kind: RoutingKind) -> f64 {
    let n = net.node_count();
    let weights = kind.hop_weights(net);
    let sums: Vec<f64> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut total = 0.0;
            let mut hops = vec![0.0f64; n];
            for &s in chunk {
                let found = search(net, s, &weights, Direction::FromRoot);
                hops[s] = 0.0;
                for &b in &found.order {
                    if b == s {
                        continue;
                    }
                    let mut weighted = 0.0;
                    for adj in net.neighbors(b) {
                        let a = adj.node;
                        if found.cost[a] != u64::MAX && found.cost[a] + weights[a] == found.cost[b]
                        {
                            weighted += found.sigma[a] * (hops[a] + 1.0);
                        }
                    }
                    hops[b] = weighted / found.sigma[b];
                    total += hops[b];
                }
            }
            total
        })
        .collect();
    sums.iter().sum::<f64>() / (n as f64 * (n as f64 - 1.0))
}

/// Brute-force effective betweenness: enumerate every simple path of every
/// ordered pair, keep those of minimal model cost and share the pair's unit
/// of traffic equally among them.
pub fn betweenness_oracle(net: &Network, model: &RoutingModel) -> Result<EdgeCentrality> {
    model.check_network(net)?;
    let n = net.node_count();
    if n > ORACLE_MAX_NODES {
        return Err(Error::InvalidArgument(format!(
            "oracle refused for {n} > {ORACLE_MAX_NODES} nodes"
        )));
    }
    let mut values = vec![0.0; net.edge_count()];
    let degrees = net.degrees();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let chosen: Vec<Vec<usize>> = match model.kind() {
                Some(kind) => {
                    let cost = |p: &Vec<usize>| -> usize {
                        match kind {
                            RoutingKind::Spr => p.len() - 1,
                            RoutingKind::Efr => p[..p.len() - 1].iter().map(|&x| degrees[x]).sum(),
                        }
                    };
                    let all = all_simple_paths(net, u, v);
                    let best = all.iter().map(&cost).min().expect("connected");
                    all.into_iter().filter(|p| cost(p) == best).collect()
                }
                None => {
                    let stored = model
                        .path_set()
                        .expect("explicit")
                        .path(u, v)
                        .expect("pair");
                    vec![stored.iter().map(|&x| x as usize).collect()]
                }
            };
            let share = 1.0 / chosen.len() as f64;
            for p in &chosen {
                for w in p.windows(2) {
                    values[net.edge_between(w[0], w[1]).expect("adjacent")] += share;
                }
            }
        }
    }
    Ok(EdgeCentrality::new(net, model.label(), values))
}
