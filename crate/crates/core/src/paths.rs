//! Explicit path sets and the greedy min-max path selection.
//!
//! A [`PathSet`] holds exactly one simple path per ordered node pair. Under
//! such a routing every pair contributes a whole unit to each edge it
//! crosses, so the effective betweenness of an edge is its occurrence count
//! and `R_c = 2N(N-1) / max_occ` under uniform bandwidth.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Network};
use crate::routing::{search, Direction, RoutingKind};

/// Largest network for which the full simple-path pool may be built.
pub const EXHAUSTIVE_POOL_MAX_NODES: usize = 10;

/// A simple path stored as its node sequence and the ids of the edges it
/// crosses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<u32>,
    edges: Vec<u32>,
}

impl Path {
    /// Validates adjacency and simplicity.
    pub fn new(net: &Network, nodes: &[usize]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument(
                "a path needs two or more nodes".into(),
            ));
        }
        let mut seen = HashSet::with_capacity(nodes.len());
        for &x in nodes {
            net.check_node(x)?;
            if !seen.insert(x) {
                return Err(Error::InvalidArgument(format!("path revisits node {x}")));
            }
        }
        let edges = nodes
            .windows(2)
            .map(|w| {
                net.edge_between(w[0], w[1])
                    .map(|e| e as u32)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("no edge between {} and {}", w[0], w[1]))
                    })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            nodes: nodes.iter().map(|&x| x as u32).collect(),
            edges,
        })
    }

    fn from_trusted(net: &Network, nodes: &[usize]) -> Self {
        let edges = nodes
            .windows(2)
            .map(|w| net.edge_between(w[0], w[1]).expect("adjacent") as u32)
            .collect();
        Self {
            nodes: nodes.iter().map(|&x| x as u32).collect(),
            edges,
        }
    }

    pub fn nodes(&self) -> Vec<usize> {
        self.nodes.iter().map(|&x| x as usize).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|&e| e as usize)
    }

    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> usize {
        self.nodes[0] as usize
    }

    pub fn target(&self) -> usize {
        *self.nodes.last().expect("non-empty") as usize
    }
}

/// Exactly one path per ordered pair, with per-edge occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    node_count: usize,
    fingerprint: u64,
    paths: Vec<Option<Path>>,
    occ: Vec<u64>,
}

impl PathSet {
    /// Collects one path per ordered pair. Fails when a pair is missing,
    /// duplicated, or a path is invalid.
    pub fn new(net: &Network, paths: impl IntoIterator<Item = Path>) -> Result<Self> {
        let n = net.node_count();
        let mut slots: Vec<Option<Path>> = vec![None; n * n];
        for p in paths {
            let (u, v) = (p.source(), p.target());
            let slot = &mut slots[u * n + v];
            if slot.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "two paths for pair ({u}, {v})"
                )));
            }
            *slot = Some(p);
        }
        for u in 0..n {
            for v in 0..n {
                if u != v && slots[u * n + v].is_none() {
                    return Err(Error::InvalidArgument(format!(
                        "no path for pair ({u}, {v})"
                    )));
                }
            }
        }
        let mut occ = vec![0u64; net.edge_count()];
        for p in slots.iter().flatten() {
            for e in p.edges() {
                occ[e] += 1;
            }
        }
        Ok(Self {
            node_count: n,
            fingerprint: net.fingerprint(),
            paths: slots,
            occ,
        })
    }

    /// The path set that takes the first candidate path of `kind` for every
    /// pair, following neighbours in adjacency order.
    pub fn first_candidates(net: &Network, kind: RoutingKind) -> Self {
        let pool = PathPool::from_routing(net, kind, 1);
        pool.first_paths(net)
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn path(&self, u: usize, v: usize) -> Option<&[u32]> {
        self.paths
            .get(u * self.node_count + v)?
            .as_ref()
            .map(|p| p.nodes.as_slice())
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&Path> {
        self.paths.get(u * self.node_count + v)?.as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Path> {
        self.paths.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.paths.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of stored paths crossing each edge.
    pub fn occupancy(&self) -> &[u64] {
        &self.occ
    }

    pub fn max_occ(&self) -> u64 {
        self.occ.iter().copied().max().unwrap_or(0)
    }

    /// Writes `u v : n0 n1 ... nk`, one line per ordered pair.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for p in self.iter() {
            write!(out, "{} {} :", p.source(), p.target())?;
            for x in &p.nodes {
                write!(out, " {x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads the format produced by [`PathSet::write`] and validates it
    /// against `net`.
    pub fn read<R: BufRead>(net: &Network, reader: R) -> Result<Self> {
        let mut paths = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let (head, tail) = line
                .split_once(':')
                .ok_or_else(|| err("missing ':' separator".into()))?;
            let parse_all = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(format!("bad node id {t:?}"))))
                    .collect()
            };
            let pair = parse_all(head)?;
            let nodes = parse_all(tail)?;
            if pair.len() != 2 {
                return Err(err("expected `u v` before ':'".into()));
            }
            if nodes.first() != Some(&pair[0]) || nodes.last() != Some(&pair[1]) {
                return Err(err("path endpoints differ from the pair".into()));
            }
            paths.push(Path::new(net, &nodes).map_err(|e| err(e.to_string()))?);
        }
        Self::new(net, paths)
    }
}

/// Candidate paths per ordered pair for [`greedy_minmax`].
#[derive(Debug, Clone)]
pub struct PathPool {
    node_count: usize,
    fingerprint: u64,
    entries: Vec<Vec<Path>>,
}

/// What goes into a [`PathPool`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoolConfig {
    /// Loopless k-shortest (hop count) paths added per pair; 0 disables.
    pub yen_k: usize,
    /// Cap on the SPR and on the EFR candidates taken per pair.
    pub max_candidates: usize,
    /// Use every simple path instead (only for tiny networks).
    pub exhaustive: bool,
}

impl Default for PoolConfig {
    fn default() -> Self {
        Self {
            yen_k: 8,
            max_candidates: 16,
            exhaustive: false,
        }
    }
}

impl PathPool {
    pub fn build(net: &Network, config: PoolConfig) -> Result<Self> {
        if config.exhaustive {
            return Self::exhaustive(net);
        }
        let mut pool = Self::from_routing(net, RoutingKind::Spr, config.max_candidates);
        pool.merge(Self::from_routing(
            net,
            RoutingKind::Efr,
            config.max_candidates,
        ));
        if config.yen_k > 0 {
            pool.merge(Self::k_shortest(net, config.yen_k));
        }
        Ok(pool)
    }

    /// Every simple path for every pair.
    pub fn exhaustive(net: &Network) -> Result<Self> {
        let n = net.node_count();
        if n > EXHAUSTIVE_POOL_MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "exhaustive path pool refused for {n} > {EXHAUSTIVE_POOL_MAX_NODES} nodes"
            )));
        }
        let mut entries = vec![Vec::new(); n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    entries[u * n + v] = all_simple_paths(net, u, v)
                        .into_iter()
                        .map(|p| Path::from_trusted(net, &p))
                        .collect();
                }
            }
        }
        Ok(self::PathPool {
            node_count: n,
            fingerprint: net.fingerprint(),
            entries,
        })
    }

    /// Up to `cap` cost-minimal paths of `kind` per pair.
    pub fn from_routing(net: &Network, kind: RoutingKind, cap: usize) -> Self {
        let n = net.node_count();
        let weights = kind.hop_weights(net);
        let per_dst: Vec<Vec<Vec<Path>>> = (0..n)
            .into_par_iter()
            .map(|dst| {
                let s = search(net, dst, &weights, Direction::ToRoot);
                (0..n)
                    .map(|src| {
                        if src == dst {
                            return Vec::new();
                        }
                        dag_paths(net, &weights, &s.cost, src, dst, cap)
                            .into_iter()
                            .map(|p| Path::from_trusted(net, &p))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut entries = vec![Vec::new(); n * n];
        for (dst, column) in per_dst.into_iter().enumerate() {
            for (src, paths) in column.into_iter().enumerate() {
                entries[src * n + dst] = paths;
            }
        }
        Self {
            node_count: n,
            fingerprint: net.fingerprint(),
            entries,
        }
    }

    /// The `k` shortest loopless paths (hop count) per pair.
    pub fn k_shortest(net: &Network, k: usize) -> Self {
        let n = net.node_count();
        let entries = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (u, v) = (idx / n, idx % n);
                if u == v {
                    return Vec::new();
                }
                k_shortest_simple_paths(net, u, v, k)
                    .into_iter()
                    .map(|p| Path::from_trusted(net, &p))
                    .collect()
            })
            .collect();
        Self {
            node_count: n,
            fingerprint: net.fingerprint(),
            entries,
        }
    }

    /// Appends the other pool's paths that are not already present.
    pub fn merge(&mut self, other: PathPool) {
        assert_eq!(
            self.fingerprint, other.fingerprint,
            "pools from different networks"
        );
        for (mine, theirs) in self.entries.iter_mut().zip(other.entries) {
            for p in theirs {
                if !mine.contains(&p) {
                    mine.push(p);
                }
            }
        }
    }

    pub fn candidates(&self, u: usize, v: usize) -> &[Path] {
        &self.entries[u * self.node_count + v]
    }

    /// Total number of stored paths.
    pub fn size(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    /// The path set made of each pair's first pool entry.
    pub fn first_paths(&self, net: &Network) -> PathSet {
        PathSet::new(net, self.entries.iter().filter_map(|c| c.first().cloned()))
            .expect("pool covers every pair")
    }
}

/// Depth-first enumeration of up to `cap` candidate paths from `src` to the
/// root of a `ToRoot` search with costs `cost_to_dst`.
fn dag_paths(
    net: &Network,
    weights: &[u64],
    cost_to_dst: &[u64],
    src: usize,
    dst: usize,
    cap: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![src];
    fn walk(
        net: &Network,
        weights: &[u64],
        cost: &[u64],
        dst: usize,
        cap: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = *stack.last().expect("non-empty");
        if x == dst {
            out.push(stack.clone());
            return;
        }
        for adj in net.neighbors(x) {
            if out.len() >= cap {
                return;
            }
            if cost[x] == weights[x] + cost[adj.node] {
                stack.push(adj.node);
                walk(net, weights, cost, dst, cap, stack, out);
                stack.pop();
            }
        }
    }
    if cap > 0 {
        walk(net, weights, cost_to_dst, dst, cap, &mut stack, &mut out);
    }
    out
}

/// Every simple path from `u` to `v`, in depth-first adjacency order.
pub fn all_simple_paths(net: &Network, u: usize, v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut on_path = vec![false; net.node_count()];
    let mut stack = vec![u];
    on_path[u] = true;
    fn walk(
        net: &Network,
        v: usize,
        on_path: &mut [bool],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = *stack.last().expect("non-empty");
        if x == v {
            out.push(stack.clone());
            return;
        }
        for adj in net.neighbors(x) {
            if !on_path[adj.node] {
                on_path[adj.node] = true;
                stack.push(adj.node);
                walk(net, v, on_path, stack, out);
                stack.pop();
                on_path[adj.node] = false;
            }
        }
    }
    walk(net, v, &mut on_path, &mut stack, &mut out);
    out
}

/// Breadth-first shortest path avoiding blocked nodes and edges.
fn bfs_path(
    net: &Network,
    s: usize,
    t: usize,
    blocked_nodes: &[bool],
    blocked_edges: &HashSet<EdgeId>,
) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; net.node_count()];
    parent[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            let mut path = vec![t];
            let mut cur = t;
            while cur != s {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for adj in net.neighbors(x) {
            if parent[adj.node] == usize::MAX
                && !blocked_nodes[adj.node]
                && !blocked_edges.contains(&adj.edge)
            {
                parent[adj.node] = x;
                queue.push_back(adj.node);
            }
        }
    }
    None
}

/// Yen's algorithm with hop count as the path length. Ties between equally
/// long candidates are broken by node sequence.
pub fn k_shortest_simple_paths(net: &Network, s: usize, t: usize, k: usize) -> Vec<Vec<usize>> {
    let n = net.node_count();
    let mut accepted: Vec<Vec<usize>> = Vec::new();
    if k == 0 || s == t {
        return accepted;
    }
    let no_nodes = vec![false; n];
    match bfs_path(net, s, t, &no_nodes, &HashSet::new()) {
        Some(p) => accepted.push(p),
        None => return accepted,
    }
    let mut pending: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    while accepted.len() < k {
        let prev = accepted.last().expect("non-empty").clone();
        for j in 0..prev.len() - 1 {
            let spur = prev[j];
            let root = &prev[..=j];
            let mut blocked_edges = HashSet::new();
            for p in &accepted {
                if p.len() > j + 1 && &p[..=j] == root {
                    if let Some(e) = net.edge_between(p[j], p[j + 1]) {
                        blocked_edges.insert(e);
                    }
                }
            }
            let mut blocked_nodes = vec![false; n];
            for &x in &root[..j] {
                blocked_nodes[x] = true;
            }
            if let Some(tail) = bfs_path(net, spur, t, &blocked_nodes, &blocked_edges) {
                let mut full = root[..j].to_vec();
                full.extend(tail);
                if !accepted.contains(&full) {
                    pending.insert((full.len(), full));
                }
            }
        }
        match pending.pop_first() {
            Some((_, p)) => accepted.push(p),
            None => break,
        }
    }
    accepted
}

/// Outcome of [`greedy_minmax`].
#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub paths: PathSet,
    pub initial_max_occ: u64,
    pub passes: usize,
    pub replacements: usize,
}

/// Greedy single-pair replacement that lowers the edge occupancy profile.
///
/// Pairs are scanned in lexicographic `(u, v)` order; for each pair the
/// first pool path whose substitution lowers the occupancy vector sorted in
/// decreasing order (compared lexicographically) is accepted. Passes repeat
/// until one makes no change. Every replacement that lowers `max_occ` lowers
/// this vector, so the result is a local optimum for `max_occ`, and
/// `max_occ` never increases along the way.
pub fn greedy_minmax(net: &Network, pool: &PathPool, init: &PathSet) -> Result<GreedyOutcome> {
    let n = net.node_count();
    if pool.fingerprint != net.fingerprint() || init.fingerprint() != net.fingerprint() {
        return Err(Error::ModelMismatch);
    }
    let mut choice = vec![usize::MAX; n * n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let cands = pool.candidates(u, v);
            if cands.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "pool has no path for ({u}, {v})"
                )));
            }
            let current = init.get(u, v).expect("complete path set");
            choice[u * n + v] = cands.iter().position(|p| p == current).ok_or_else(|| {
                Error::InvalidArgument(format!("initial path for ({u}, {v}) is not in the pool"))
            })?;
        }
    }
    let mut occ = init.occupancy().to_vec();
    let initial_max_occ = init.max_occ();
    let mut passes = 0;
    let mut replacements = 0;
    let mut removed = Vec::new();
    let mut inserted = Vec::new();
    loop {
        passes += 1;
        let mut changed = false;
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let cands = pool.candidates(u, v);
                if cands.len() < 2 {
                    continue;
                }
                let current = &cands[choice[u * n + v]];
                for (idx, cand) in cands.iter().enumerate() {
                    if idx == choice[u * n + v] {
                        continue;
                    }
                    removed.clear();
                    inserted.clear();
                    for e in current.edges() {
                        if !cand.edges.contains(&(e as u32)) {
                            removed.push(occ[e]);
                            inserted.push(occ[e] - 1);
                        }
                    }
                    for e in cand.edges() {
                        if !current.edges.contains(&(e as u32)) {
                            removed.push(occ[e]);
                            inserted.push(occ[e] + 1);
                        }
                    }
                    removed.sort_unstable_by(|a, b| b.cmp(a));
                    inserted.sort_unstable_by(|a, b| b.cmp(a));
                    if inserted < removed {
                        for e in current.edges() {
                            occ[e] -= 1;
                        }
                        for e in cand.edges() {
                            occ[e] += 1;
                        }
                        choice[u * n + v] = idx;
                        replacements += 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let paths = PathSet::new(
        net,
        (0..n * n)
            .filter(|&i| i / n != i % n)
            .map(|i| pool.candidates(i / n, i % n)[choice[i]].clone()),
    )?;
    debug_assert_eq!(paths.occupancy(), occ.as_slice());
    Ok(GreedyOutcome {
        paths,
        initial_max_occ,
        passes,
        replacements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn simple_paths_on_cycle() {
        let c4 = cycle(4);
        let mut paths = all_simple_paths(&c4, 0, 2);
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1, 2], vec![0, 3, 2]]);
        assert_eq!(all_simple_paths(&complete(4), 0, 1).len(), 5);
    }

    #[test]
    fn yen_matches_sorted_enumeration() {
        let net = kite();
        for (u, v) in [(4, 3), (1, 3), (0, 2)] {
            let mut all = all_simple_paths(&net, u, v);
            all.sort_by_key(|p| p.len());
            let yen = k_shortest_simple_paths(&net, u, v, 10);
            assert_eq!(yen.len(), all.len());
            let lens: Vec<_> = yen.iter().map(Vec::len).collect();
            let expect: Vec<_> = all.iter().map(Vec::len).collect();
            assert_eq!(lens, expect);
        }
        let k5 = complete(5);
        let yen = k_shortest_simple_paths(&k5, 0, 1, 4);
        assert_eq!(yen[0], vec![0, 1]);
        assert!(yen[1..].iter().all(|p| p.len() == 3));
    }

    #[test]
    fn path_set_roundtrip_and_occupancy() {
        let c4 = cycle(4);
        let set = PathSet::first_candidates(&c4, RoutingKind::Spr);
        assert_eq!(set.len(), 12);
        assert_eq!(set.occupancy().iter().sum::<u64>(), 16);
        let mut buf = Vec::new();
        set.write(&mut buf).unwrap();
        let back = PathSet::read(&c4, buf.as_slice()).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn path_set_rejects_bad_input() {
        let p3 = path(3);
        assert!(PathSet::read(&p3, "0 2 : 0 2\n".as_bytes()).is_err());
        assert!(PathSet::read(&p3, "0 2 : 0 1\n".as_bytes()).is_err());
        let incomplete = "0 1 : 0 1\n";
        assert!(PathSet::read(&p3, incomplete.as_bytes()).is_err());
        assert!(Path::new(&p3, &[0, 1, 0]).is_err());
    }

    #[test]
    fn greedy_keeps_ring_and_star_optimum() {
        for net in [cycle(7), star(4)] {
            let pool = PathPool::exhaustive(&net).unwrap();
            let init = PathSet::first_candidates(&net, RoutingKind::Spr);
            let out = greedy_minmax(&net, &pool, &init).unwrap();
            assert_eq!(out.paths.max_occ(), init.max_occ());
        }
    }

    #[test]
    fn greedy_reduces_uneven_ring_choice() {
        // on an even ring the first-candidate SPR set sends every antipodal
        // pair the same way around; balancing them lowers the maximum
        let ring = cycle(8);
        let pool = PathPool::exhaustive(&ring).unwrap();
        let init = PathSet::first_candidates(&ring, RoutingKind::Spr);
        let out = greedy_minmax(&ring, &pool, &init).unwrap();
        assert!(out.paths.max_occ() < init.max_occ());
        assert_eq!(out.paths.max_occ(), 16);
    }

    #[test]
    fn greedy_requires_pool_coverage() {
        let c4 = cycle(4);
        let pool = PathPool::exhaustive(&c4).unwrap();
        let other = PathPool::exhaustive(&cycle(5)).unwrap();
        let init = PathSet::first_candidates(&c4, RoutingKind::Spr);
        assert!(greedy_minmax(&c4, &other, &init).is_err());
        assert!(greedy_minmax(&c4, &pool, &init).is_ok());
        assert!(PathPool::exhaustive(&cycle(11)).is_err());
    }
}
