//! Discrete-time packet simulator and empirical critical-rate search.
//!
//! Each undirected edge gives two directed interfaces with the edge's
//! capacity and an unbounded FIFO queue. One step is:
//!
//! 1. inject `R` packets at uniformly drawn sources (with replacement), each
//!    with a uniformly drawn destination other than its source, onto the
//!    interface picked by the routing;
//! 2. every interface adds its capacity to a credit and forwards
//!    `floor(credit)` head-of-line packets (fewer if the queue runs dry),
//!    keeping only the fractional credit;
//! 3. forwarded packets arrive at the neighbour, where they leave the
//!    network or join the queue of their next interface (served from the
//!    next step on);
//! 4. record `Θ(t)`, the number of packets still in the network.
//!
//! The order parameter is `η = <ΔΘ> / (R Δt)` averaged over consecutive
//! windows after the transient.

use std::collections::VecDeque;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::allocation::BandwidthAllocation;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::routing::RoutingModel;

/// Parameters of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Packets injected per step.
    pub rate: u32,
    pub total_steps: u32,
    pub transient_steps: u32,
    /// Window length `Δt`.
    pub window: u32,
    pub seed: u64,
    /// Stop early and report congestion once this many packets are in
    /// flight.
    pub theta_cap: u64,
}

impl SimulationConfig {
    /// Transient of 1000 steps followed by ten windows of 100 steps.
    pub fn new(rate: u32, seed: u64) -> Self {
        Self {
            rate,
            total_steps: 2000,
            transient_steps: 1000,
            window: 100,
            seed,
            theta_cap: 5_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rate == 0 {
            return Err(Error::InvalidArgument("injection rate must be >= 1".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidArgument("window must be >= 1 step".into()));
        }
        if u64::from(self.total_steps)
            <= u64::from(self.transient_steps) + 2 * u64::from(self.window)
        {
            return Err(Error::InvalidArgument(format!(
                "total steps {} must exceed transient {} plus two windows of {}",
                self.total_steps, self.transient_steps, self.window
            )));
        }
        Ok(())
    }

    pub fn windows(&self) -> u32 {
        (self.total_steps - self.transient_steps) / self.window
    }
}

/// Result of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterEstimate {
    /// Clamped at zero.
    pub eta: f64,
    pub raw_eta: f64,
    pub rate: u32,
    /// `Θ(t)` after each simulated step.
    pub theta: Vec<u64>,
    pub windows: u32,
    pub injected: u64,
    pub delivered: u64,
    pub in_flight: u64,
    /// The run hit `theta_cap` and stopped early.
    pub capped: bool,
    /// `injected == delivered + queued` held after every step.
    pub conservation_held: bool,
}

#[derive(Debug, Clone, Copy)]
struct Packet {
    src: u32,
    dst: u32,
    hops: u32,
}

/// Runs one simulation of `model` with capacities `alloc` on `net`.
pub fn simulate(
    net: &Network,
    model: &RoutingModel,
    alloc: &BandwidthAllocation,
    cfg: &SimulationConfig,
) -> Result<OrderParameterEstimate> {
    cfg.validate()?;
    model.check_network(net)?;
    alloc.check_network(net)?;
    let n = net.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut queues: Vec<VecDeque<Packet>> = vec![VecDeque::new(); 2 * net.edge_count()];
    let mut credit = vec![0.0f64; queues.len()];
    let capacity: Vec<f64> = (0..queues.len()).map(|i| alloc.capacity(i / 2)).collect();
    let mut in_transit: Vec<(Packet, usize)> = Vec::new();

    // interface 2e carries edges[e].0 -> edges[e].1, 2e+1 the reverse
    let interface = |from: usize, edge: usize| 2 * edge + usize::from(net.edge(edge).0 != from);

    let mut theta = Vec::with_capacity(cfg.total_steps as usize);
    let (mut injected, mut delivered) = (0u64, 0u64);
    let mut conservation_held = true;
    let mut capped = false;

    for _ in 0..cfg.total_steps {
        for _ in 0..cfg.rate {
            let src = rng.gen_range(0..n);
            let mut dst = rng.gen_range(0..n - 1);
            if dst >= src {
                dst += 1;
            }
            let hop = model.forward(net, src, src, dst, 0, &mut rng);
            queues[interface(src, hop.edge)].push_back(Packet {
                src: src as u32,
                dst: dst as u32,
                hops: 0,
            });
            injected += 1;
        }

        for (i, queue) in queues.iter_mut().enumerate() {
            let available = credit[i] + capacity[i];
            let take = (available.floor() as usize).min(queue.len());
            let to = {
                let (a, b) = net.edge(i / 2);
                if i % 2 == 0 {
                    b
                } else {
                    a
                }
            };
            in_transit.extend(queue.drain(..take).map(|p| (p, to)));
            credit[i] = available.fract();
        }

        for (mut packet, at) in in_transit.drain(..) {
            packet.hops += 1;
            if at == packet.dst as usize {
                delivered += 1;
                continue;
            }
            let hop = model.forward(
                net,
                packet.src as usize,
                at,
                packet.dst as usize,
                packet.hops as usize,
                &mut rng,
            );
            queues[interface(at, hop.edge)].push_back(packet);
        }

        let queued: u64 = queues.iter().map(|q| q.len() as u64).sum();
        if injected != delivered + queued {
            conservation_held = false;
        }
        theta.push(queued);
        if queued >= cfg.theta_cap {
            capped = true;
            break;
        }
    }

    let raw_eta = order_parameter(&theta, cfg);
    let in_flight = *theta.last().unwrap_or(&0);
    Ok(OrderParameterEstimate {
        eta: raw_eta.max(0.0),
        raw_eta,
        rate: cfg.rate,
        windows: cfg.windows(),
        theta,
        injected,
        delivered,
        in_flight,
        capped,
        conservation_held,
    })
}

/// Mean of the window slopes `(Θ(t+Δt) - Θ(t)) / (R Δt)` after the
/// transient. For a run cut short by the packet cap, the growth since the
/// transient (or since the start) is used instead.
fn order_parameter(theta: &[u64], cfg: &SimulationConfig) -> f64 {
    let r = f64::from(cfg.rate);
    let t0 = cfg.transient_steps as usize;
    let dt = cfg.window as usize;
    let at = |t: usize| if t == 0 { 0.0 } else { theta[t - 1] as f64 };
    let steps = theta.len();
    if steps >= t0 + dt {
        let windows = (steps - t0) / dt;
        let slopes: f64 = (0..windows)
            .map(|k| (at(t0 + (k + 1) * dt) - at(t0 + k * dt)) / (r * dt as f64))
            .sum();
        slopes / windows as f64
    } else {
        at(steps) / (r * steps.max(1) as f64)
    }
}

/// Writes `step,theta` rows.
pub fn write_theta_csv<W: Write>(estimate: &OrderParameterEstimate, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "theta"])?;
    for (t, theta) in estimate.theta.iter().enumerate() {
        w.write_record(&[(t + 1).to_string(), theta.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Critical-rate search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// `η` threshold separating free flow from congestion.
    pub epsilon: f64,
    /// First rate probed by the doubling phase.
    pub start_rate: u32,
    /// Highest rate probed.
    pub max_rate: u32,
    /// Run template; `rate` and `seed` are set per probe.
    pub run: SimulationConfig,
}

impl SweepConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            epsilon: 0.01,
            start_rate: 1,
            max_rate: 1 << 16,
            run: SimulationConfig::new(1, seed),
        }
    }
}

/// Outcome of [`find_rc`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRate {
    /// Smallest probed rate whose `η` exceeded the threshold, or
    /// `max_rate` when none did.
    pub rate: u32,
    /// No congestion was found up to `max_rate`.
    pub unsaturated: bool,
    /// `(rate, η)` of every probe, in probing order.
    pub probes: Vec<(u32, f64)>,
    pub conservation_held: bool,
}

/// Seed for the probe at `rate`: a splitmix64 step over the base seed and
/// the rate.
pub fn probe_seed(base: u64, rate: u32) -> u64 {
    let mut z = base
        .wrapping_add(u64::from(rate).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Smallest integer rate with `η > ε`: doubling from `start_rate` until a
/// congested probe, then integer bisection between the last free and the
/// first congested rate.
pub fn find_rc(
    net: &Network,
    model: &RoutingModel,
    alloc: &BandwidthAllocation,
    sweep: &SweepConfig,
) -> Result<CriticalRate> {
    if sweep.start_rate == 0 || sweep.max_rate < sweep.start_rate {
        return Err(Error::InvalidArgument(format!(
            "rate range {}..={} is empty",
            sweep.start_rate, sweep.max_rate
        )));
    }
    let mut probes = Vec::new();
    let mut conservation_held = true;
    let mut congested = |rate: u32| -> Result<bool> {
        let cfg = SimulationConfig {
            rate,
            seed: probe_seed(sweep.run.seed, rate),
            ..sweep.run
        };
        let est = simulate(net, model, alloc, &cfg)?;
        conservation_held &= est.conservation_held;
        probes.push((rate, est.eta));
        Ok(est.eta > sweep.epsilon)
    };

    let mut free = 0u32;
    let mut rate = sweep.start_rate;
    let hit = loop {
        if congested(rate)? {
            break rate;
        }
        free = rate;
        if rate == sweep.max_rate {
            return Ok(CriticalRate {
                rate,
                unsaturated: true,
                probes,
                conservation_held,
            });
        }
        rate = rate.saturating_mul(2).min(sweep.max_rate);
    };
    let (mut lo, mut hi) = (free, hit);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if congested(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalRate {
        rate: hi,
        unsaturated: false,
        probes,
        conservation_held,
    })
}
