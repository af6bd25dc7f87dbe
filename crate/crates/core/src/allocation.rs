//! Link-bandwidth allocation under a fixed budget and the analytic critical
//! rate.
//!
//! The budget is `M` (one unit per edge). An allocation gives every
//! undirected edge a capacity `C(e)` that each of its two directed
//! interfaces may use per step. For a routing with effective betweenness
//! `B(e)` the network stays in free flow while
//! `R <= min_e 2 C(e) N(N-1) / B(e)`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::centrality::{betweenness, mean_path_length, EdgeCentrality};
use crate::error::{Error, Result};
use crate::graph::{metrics, Network};
use crate::routing::RoutingKind;

/// Bandwidth allocation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Allocation {
    /// Uniform: every edge gets 1.
    Uc,
    /// Proportional to shortest-path edge betweenness.
    Bc,
    /// Proportional to the effective betweenness of the routing in use.
    Ebc,
}

impl Allocation {
    pub fn name(self) -> &'static str {
        match self {
            Allocation::Uc => "uc",
            Allocation::Bc => "bc",
            Allocation::Ebc => "ebc",
        }
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Allocation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uc" => Ok(Allocation::Uc),
            "bc" => Ok(Allocation::Bc),
            "ebc" => Ok(Allocation::Ebc),
            other => Err(Error::InvalidArgument(format!(
                "unknown allocation {other:?}"
            ))),
        }
    }
}

/// A (bandwidth allocation, routing) combination such as `ebc-efr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Scheme {
    pub allocation: Allocation,
    pub routing: RoutingKind,
}

impl Scheme {
    pub const UC_SPR: Scheme = Scheme::new(Allocation::Uc, RoutingKind::Spr);
    pub const UC_EFR: Scheme = Scheme::new(Allocation::Uc, RoutingKind::Efr);
    pub const BC_SPR: Scheme = Scheme::new(Allocation::Bc, RoutingKind::Spr);
    pub const EBC_EFR: Scheme = Scheme::new(Allocation::Ebc, RoutingKind::Efr);

    /// The four combinations of the reference tables, in table order.
    pub const REFERENCE: [Scheme; 4] = [
        Scheme::UC_SPR,
        Scheme::UC_EFR,
        Scheme::BC_SPR,
        Scheme::EBC_EFR,
    ];

    pub const fn new(allocation: Allocation, routing: RoutingKind) -> Self {
        Self {
            allocation,
            routing,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.allocation, self.routing)
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, r) = s.trim().split_once(['-', ',']).ok_or_else(|| {
            Error::InvalidArgument(format!("scheme {s:?} is not `alloc-routing`"))
        })?;
        Ok(Scheme::new(a.parse()?, r.parse()?))
    }
}

/// Per-edge capacities summing to the edge count.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthAllocation {
    capacities: Vec<f64>,
    allocation: Allocation,
    fingerprint: u64,
}

impl BandwidthAllocation {
    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn capacity(&self, edge: usize) -> f64 {
        self.capacities[edge]
    }

    pub fn allocation(&self) -> Allocation {
        self.allocation
    }

    pub fn c_max(&self) -> f64 {
        self.capacities.iter().copied().fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        self.capacities.iter().sum()
    }

    pub fn check_network(&self, net: &Network) -> Result<()> {
        if self.fingerprint == net.fingerprint() {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }
}

/// Distributes the budget `M` over the edges. `BC` needs shortest-path
/// betweenness; `EBC` needs the effective betweenness of the routing the
/// allocation will serve.
pub fn allocate(
    net: &Network,
    centrality: Option<&EdgeCentrality>,
    allocation: Allocation,
) -> Result<BandwidthAllocation> {
    let m = net.edge_count();
    let capacities = match allocation {
        Allocation::Uc => vec![1.0; m],
        Allocation::Bc | Allocation::Ebc => {
            let c = centrality.ok_or_else(|| {
                Error::InvalidArgument(format!("{allocation} allocation needs a centrality"))
            })?;
            c.check_network(net)?;
            if allocation == Allocation::Bc && c.routing() != RoutingKind::Spr.name() {
                return Err(Error::InvalidArgument(format!(
                    "BC allocation needs shortest-path betweenness, got {}",
                    c.routing()
                )));
            }
            let total = c.total();
            if total <= 0.0 {
                return Err(Error::InvalidArgument(
                    "centrality is identically zero".into(),
                ));
            }
            c.values().iter().map(|&b| b / total * m as f64).collect()
        }
    };
    Ok(BandwidthAllocation {
        capacities,
        allocation,
        fingerprint: net.fingerprint(),
    })
}

/// `min_e 2 C(e) N(N-1) / B(e)` over edges that carry traffic.
pub fn analytic_rc(
    net: &Network,
    alloc: &BandwidthAllocation,
    centrality: &EdgeCentrality,
) -> Result<f64> {
    alloc.check_network(net)?;
    centrality.check_network(net)?;
    let n = net.node_count() as f64;
    let pairs = n * (n - 1.0);
    let rc = alloc
        .capacities()
        .iter()
        .zip(centrality.values())
        .filter(|(_, &b)| b > 0.0)
        .map(|(&c, &b)| 2.0 * c * pairs / b)
        .fold(f64::INFINITY, f64::min);
    if rc.is_infinite() {
        return Err(Error::InvalidArgument(
            "centrality is identically zero".into(),
        ));
    }
    Ok(rc)
}

/// The capacity ceiling `2M/L` shared by every design on `net`.
pub fn theorem_bound(net: &Network) -> Result<f64> {
    let l = metrics(net)?.average_path_length;
    Ok(2.0 * net.edge_count() as f64 / l)
}

/// Where a design point came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub topology: String,
    pub routing: String,
    pub scheme: String,
    pub seed: Option<u64>,
    pub nodes: usize,
    pub edges: usize,
}

/// `(C_max, R_c)` of one design on one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub c_max: f64,
    pub r_c: f64,
    pub theorem_bound: f64,
    pub provenance: Provenance,
}

pub const DESIGN_POINT_HEADER: [&str; 9] = [
    "topology",
    "routing",
    "scheme",
    "seed",
    "N",
    "M",
    "c_max",
    "r_c",
    "theorem_bound",
];

/// Writes points as CSV with [`DESIGN_POINT_HEADER`].
pub fn write_design_points<W: Write>(points: &[DesignPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DESIGN_POINT_HEADER)?;
    for p in points {
        let pv = &p.provenance;
        w.write_record(&[
            pv.topology.clone(),
            pv.routing.clone(),
            pv.scheme.clone(),
            pv.seed.map(|s| s.to_string()).unwrap_or_default(),
            pv.nodes.to_string(),
            pv.edges.to_string(),
            p.c_max.to_string(),
            p.r_c.to_string(),
            p.theorem_bound.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Evaluates designs on one network, computing each centrality and the
/// average path length at most once.
#[derive(Debug)]
pub struct Designer<'a> {
    net: &'a Network,
    topology: String,
    seed: Option<u64>,
    spr: OnceLock<EdgeCentrality>,
    efr: OnceLock<EdgeCentrality>,
    path_length: OnceLock<f64>,
}

impl<'a> Designer<'a> {
    pub fn new(net: &'a Network, topology: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            net,
            topology: topology.into(),
            seed,
            spr: OnceLock::new(),
            efr: OnceLock::new(),
            path_length: OnceLock::new(),
        }
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    pub fn centrality(&self, kind: RoutingKind) -> &EdgeCentrality {
        let cell = match kind {
            RoutingKind::Spr => &self.spr,
            RoutingKind::Efr => &self.efr,
        };
        cell.get_or_init(|| betweenness(self.net, kind))
    }

    /// Average shortest path length `L`.
    pub fn path_length(&self) -> f64 {
        *self.path_length.get_or_init(|| {
            metrics(self.net)
                .expect("valid network")
                .average_path_length
        })
    }

    /// Mean candidate-path hop length of `kind`, computed independently of
    /// the betweenness values.
    pub fn routing_path_length(&self, kind: RoutingKind) -> f64 {
        match kind {
            RoutingKind::Spr => self.path_length(),
            RoutingKind::Efr => mean_path_length(self.net, kind),
        }
    }

    pub fn theorem_bound(&self) -> f64 {
        2.0 * self.net.edge_count() as f64 / self.path_length()
    }

    pub fn allocation(&self, scheme: Scheme) -> Result<BandwidthAllocation> {
        let centrality = match scheme.allocation {
            Allocation::Uc => None,
            Allocation::Bc => Some(self.centrality(RoutingKind::Spr)),
            Allocation::Ebc => Some(self.centrality(scheme.routing)),
        };
        allocate(self.net, centrality, scheme.allocation)
    }

    pub fn design_point(&self, scheme: Scheme) -> Result<DesignPoint> {
        let alloc = self.allocation(scheme)?;
        let r_c = analytic_rc(self.net, &alloc, self.centrality(scheme.routing))?;
        Ok(DesignPoint {
            c_max: alloc.c_max(),
            r_c,
            theorem_bound: self.theorem_bound(),
            provenance: Provenance {
                topology: self.topology.clone(),
                routing: scheme.routing.to_string(),
                scheme: scheme.to_string(),
                seed: self.seed,
                nodes: self.net.node_count(),
                edges: self.net.edge_count(),
            },
        })
    }

    /// Limiting designs that bound the achievable area: A keeps uniform
    /// bandwidth but routes packets in loops (`R_c -> 0`), B puts the whole
    /// budget on one edge (`C_max = M`, `R_c -> 0`).
    pub fn limiting_points(&self) -> [DesignPoint; 2] {
        let make = |label: &str, c_max: f64| DesignPoint {
            c_max,
            r_c: 0.0,
            theorem_bound: self.theorem_bound(),
            provenance: Provenance {
                topology: self.topology.clone(),
                routing: "limit".into(),
                scheme: label.into(),
                seed: self.seed,
                nodes: self.net.node_count(),
                edges: self.net.edge_count(),
            },
        };
        [make("A", 1.0), make("B", self.net.edge_count() as f64)]
    }
}

/// One-shot design point on `net`.
pub fn design_point(net: &Network, scheme: Scheme) -> Result<DesignPoint> {
    Designer::new(net, "custom", None).design_point(scheme)
}
