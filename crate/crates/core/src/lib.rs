//! Capacity design for communication networks.
//!
//! Generates synthetic topologies, computes edge betweenness and the
//! effective betweenness of shortest-path (SPR) and minimum-degree-sum
//! (EFR) routing, allocates a fixed bandwidth budget across links, predicts
//! the critical injection rate analytically and measures it with a
//! packet-level simulator.

pub mod allocation;
pub mod centrality;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod paths;
pub mod routing;
pub mod sim;
pub mod topology;

pub use allocation::{
    allocate, analytic_rc, design_point, theorem_bound, Allocation, BandwidthAllocation,
    DesignPoint, Designer, Scheme,
};
pub use centrality::{
    betweenness, betweenness_oracle, edge_betweenness, effective_betweenness, EdgeCentrality,
};
pub use error::{Error, Result};
pub use experiment::{
    emit_achievable_sketch, greedy_paths, run_scaling, run_table, ExperimentPlan, Mode, ScalingFit,
    TableReport,
};
pub use graph::{metrics, GraphMetrics, Network};
pub use paths::{greedy_minmax, Path, PathPool, PathSet, PoolConfig};
pub use routing::{RoutingKind, RoutingModel};
pub use sim::{find_rc, simulate, OrderParameterEstimate, SimulationConfig, SweepConfig};
pub use topology::{Family, TopologySpec};
