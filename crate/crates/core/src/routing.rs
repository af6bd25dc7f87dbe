//! Topology-based routing models.
//!
//! SPR and EFR are both "shortest path" routings once each directed hop
//! `x -> y` is given the integer weight `w(x)`: `1` for SPR and the degree
//! of `x` for EFR. The cost of a path is then the hop count (SPR) or the
//! degree sum of every node except the destination (EFR). Candidate paths
//! are all cost-minimal simple paths, and costs are compared as integers so
//! ties are detected exactly.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Adjacent, Network};
use crate::paths::PathSet;

/// The cost-minimising routings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoutingKind {
    /// Minimum hop count.
    Spr,
    /// Minimum sum of node degrees along the path, destination excluded.
    Efr,
}

impl RoutingKind {
    pub fn name(self) -> &'static str {
        match self {
            RoutingKind::Spr => "spr",
            RoutingKind::Efr => "efr",
        }
    }

    /// Per-node weight of leaving that node.
    pub fn hop_weights(self, net: &Network) -> Vec<u64> {
        match self {
            RoutingKind::Spr => vec![1; net.node_count()],
            RoutingKind::Efr => net.degrees().into_iter().map(|d| d as u64).collect(),
        }
    }
}

impl fmt::Display for RoutingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoutingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spr" => Ok(RoutingKind::Spr),
            "efr" => Ok(RoutingKind::Efr),
            other => Err(Error::InvalidArgument(format!("unknown routing {other:?}"))),
        }
    }
}

/// Result of a single-root cost-minimal search.
///
/// In the forward direction `cost[x]` is the cost from the root to `x` and
/// `sigma[x]` the number of candidate root→x paths. In the reverse
/// direction both describe paths from `x` to the root.
#[derive(Debug, Clone)]
pub struct Search {
    pub root: usize,
    pub order: Vec<usize>,
    pub cost: Vec<u64>,
    pub sigma: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Paths leaving the root.
    FromRoot,
    /// Paths arriving at the root.
    ToRoot,
}

/// Cost-minimal search with multi-predecessor path counting. Traversing
/// `a -> b` costs `weights[a]`. Uniform weights use breadth-first order.
pub fn search(net: &Network, root: usize, weights: &[u64], direction: Direction) -> Search {
    let n = net.node_count();
    let mut cost = vec![u64::MAX; n];
    let mut sigma = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    cost[root] = 0;
    sigma[root] = 1.0;
    let step = |from: usize, to: usize| match direction {
        Direction::FromRoot => weights[from],
        Direction::ToRoot => weights[to],
    };

    let uniform = weights.windows(2).all(|w| w[0] == w[1]);
    if uniform {
        let mut queue = VecDeque::with_capacity(n);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for adj in net.neighbors(x) {
                let y = adj.node;
                let cand = cost[x] + step(x, y);
                if cost[y] == u64::MAX {
                    cost[y] = cand;
                    queue.push_back(y);
                }
                if cost[y] == cand {
                    sigma[y] += sigma[x];
                }
            }
        }
    } else {
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, root)));
        while let Some(Reverse((c, x))) = heap.pop() {
            if settled[x] || c != cost[x] {
                continue;
            }
            settled[x] = true;
            order.push(x);
            for adj in net.neighbors(x) {
                let y = adj.node;
                if settled[y] {
                    continue;
                }
                let cand = c + step(x, y);
                if cand < cost[y] {
                    cost[y] = cand;
                    sigma[y] = sigma[x];
                    heap.push(Reverse((cand, y)));
                } else if cand == cost[y] {
                    sigma[y] += sigma[x];
                }
            }
        }
    }
    Search {
        root,
        order,
        cost,
        sigma,
    }
}

/// Per-destination routing state: cost to the destination and number of
/// candidate paths to it, for every node.
#[derive(Debug, Clone)]
struct DestinationTable {
    cost: Vec<u64>,
    count: Vec<f64>,
}

#[derive(Debug, Clone)]
enum Routes {
    Dag {
        kind: RoutingKind,
        weights: Vec<u64>,
        tables: Vec<DestinationTable>,
    },
    Explicit(PathSet),
}

/// A routing bound to one network.
#[derive(Debug, Clone)]
pub struct RoutingModel {
    fingerprint: u64,
    node_count: usize,
    routes: Routes,
}

/// Shortest-path routing: all minimum-hop paths are candidates.
pub fn build_spr(net: &Network) -> RoutingModel {
    RoutingModel::build(net, RoutingKind::Spr)
}

/// Efficient routing: all paths minimising the degree sum are candidates.
pub fn build_efr(net: &Network) -> RoutingModel {
    RoutingModel::build(net, RoutingKind::Efr)
}

impl RoutingModel {
    pub fn build(net: &Network, kind: RoutingKind) -> Self {
        let weights = kind.hop_weights(net);
        let tables = (0..net.node_count())
            .into_par_iter()
            .map(|dst| {
                let s = search(net, dst, &weights, Direction::ToRoot);
                DestinationTable {
                    cost: s.cost,
                    count: s.sigma,
                }
            })
            .collect();
        Self {
            fingerprint: net.fingerprint(),
            node_count: net.node_count(),
            routes: Routes::Dag {
                kind,
                weights,
                tables,
            },
        }
    }

    /// A routing that sends each ordered pair along its single stored path.
    pub fn from_path_set(net: &Network, paths: PathSet) -> Result<Self> {
        if paths.fingerprint() != net.fingerprint() {
            return Err(Error::ModelMismatch);
        }
        Ok(Self {
            fingerprint: net.fingerprint(),
            node_count: net.node_count(),
            routes: Routes::Explicit(paths),
        })
    }

    /// `None` for explicit path sets.
    pub fn kind(&self) -> Option<RoutingKind> {
        match &self.routes {
            Routes::Dag { kind, .. } => Some(*kind),
            Routes::Explicit(_) => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match &self.routes {
            Routes::Dag { kind, .. } => kind.name(),
            Routes::Explicit(_) => "explicit",
        }
    }

    pub fn path_set(&self) -> Option<&PathSet> {
        match &self.routes {
            Routes::Explicit(p) => Some(p),
            Routes::Dag { .. } => None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn check_network(&self, net: &Network) -> Result<()> {
        if self.fingerprint == net.fingerprint() {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for node in [u, v] {
            if node >= self.node_count {
                return Err(Error::InvalidNode {
                    node,
                    node_count: self.node_count,
                });
            }
        }
        Ok(())
    }

    /// Number of candidate paths from `u` to `v` (`δ(u, v)`), as a real.
    pub fn path_count(&self, u: usize, v: usize) -> Result<f64> {
        self.check_pair(u, v)?;
        Ok(match &self.routes {
            Routes::Dag { tables, .. } => tables[v].count[u],
            Routes::Explicit(_) => 1.0,
        })
    }

    /// Model cost of the candidate paths from `u` to `v`: hops for SPR,
    /// degree sum for EFR, hops of the stored path for explicit sets.
    pub fn cost(&self, u: usize, v: usize) -> Result<u64> {
        self.check_pair(u, v)?;
        Ok(match &self.routes {
            Routes::Dag { tables, .. } => tables[v].cost[u],
            Routes::Explicit(p) => p.path(u, v).map_or(0, |p| p.len() as u64 - 1),
        })
    }

    /// Neighbours of `current` that start a candidate path to `dst`, each
    /// with the number of candidate paths through it. The counts sum to
    /// `path_count(current, dst)`.
    pub fn candidate_next_hops(
        &self,
        net: &Network,
        current: usize,
        dst: usize,
    ) -> Result<Vec<(usize, f64)>> {
        self.check_network(net)?;
        self.check_pair(current, dst)?;
        if current == dst {
            return Err(Error::InvalidArgument(
                "next hop requested at the destination".into(),
            ));
        }
        match &self.routes {
            Routes::Dag {
                weights, tables, ..
            } => {
                let table = &tables[dst];
                Ok(net
                    .neighbors(current)
                    .iter()
                    .filter(|adj| table.cost[current] == weights[current] + table.cost[adj.node])
                    .map(|adj| (adj.node, table.count[adj.node]))
                    .collect())
            }
            Routes::Explicit(_) => Err(Error::Unsupported(
                "explicit path sets route by source; use the stored path".into(),
            )),
        }
    }

    /// Draws the next hop towards `dst`, uniformly over candidate paths.
    pub fn next_hop<R: Rng + ?Sized>(
        &self,
        net: &Network,
        current: usize,
        dst: usize,
        rng: &mut R,
    ) -> Result<usize> {
        self.check_network(net)?;
        self.check_pair(current, dst)?;
        if current == dst {
            return Err(Error::InvalidArgument(
                "next hop requested at the destination".into(),
            ));
        }
        match &self.routes {
            Routes::Dag {
                weights, tables, ..
            } => Ok(sample_next_hop(net, weights, &tables[dst], current, rng).node),
            Routes::Explicit(_) => Err(Error::Unsupported(
                "explicit path sets route by source; use the stored path".into(),
            )),
        }
    }

    /// Forwarding decision used by the simulator: the chosen neighbour and
    /// the edge leading to it. Skips validation.
    pub(crate) fn forward<R: Rng + ?Sized>(
        &self,
        net: &Network,
        src: usize,
        current: usize,
        dst: usize,
        hops_taken: usize,
        rng: &mut R,
    ) -> Adjacent {
        match &self.routes {
            Routes::Dag {
                weights, tables, ..
            } => sample_next_hop(net, weights, &tables[dst], current, rng),
            Routes::Explicit(p) => {
                let next = p.path(src, dst).expect("complete path set")[hops_taken + 1] as usize;
                Adjacent {
                    node: next,
                    edge: net
                        .edge_between(current, next)
                        .expect("stored path follows edges"),
                }
            }
        }
    }
}

fn sample_next_hop<R: Rng + ?Sized>(
    net: &Network,
    weights: &[u64],
    table: &DestinationTable,
    current: usize,
    rng: &mut R,
) -> Adjacent {
    let target = table.cost[current] - weights[current];
    let total = table.count[current];
    let mut r = rng.gen::<f64>() * total;
    let mut last = None;
    for adj in net.neighbors(current) {
        if table.cost[adj.node] == target {
            last = Some(*adj);
            r -= table.count[adj.node];
            if r < 0.0 {
                return *adj;
            }
        }
    }
    last.expect("every non-destination node has a successor")
}
