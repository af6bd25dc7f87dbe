//! Undirected simple connected networks and their hop-count metrics.
//!
//! Every pair sum in this crate runs over *ordered* node pairs `u != v`, so
//! the average path length is normalised by `N(N-1)` and the betweenness
//! values produced by [`crate::centrality`] sum to `N(N-1) L`.

use std::collections::{HashSet, VecDeque};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Stable integer handle of an undirected edge.
pub type EdgeId = usize;

/// Adjacency entry: the neighbour and the id of the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub node: usize,
    pub edge: EdgeId,
}

/// An undirected, simple, connected graph.
///
/// Edges are stored with their endpoints in the order they were supplied;
/// `edge(id)` returns them that way, and the adjacency lists reference each
/// edge from both endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<Adjacent>>,
}

impl Network {
    /// Builds a network, checking simplicity and connectivity.
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let net = Self::new_unchecked_connectivity(node_count, edges)?;
        let components = net.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(net)
    }

    /// Builds a simple graph without requiring it to be connected. Used by
    /// generators that repair connectivity afterwards.
    pub(crate) fn new_unchecked_connectivity(
        node_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::InvalidArgument(format!(
                "a network needs at least 2 nodes, got {node_count}"
            )));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::InvalidNode { node, node_count });
                }
            }
            if u == v {
                return Err(Error::NotSimple(format!("self-loop at node {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::NotSimple(format!("parallel edge {u}-{v}")));
            }
            adjacency[u].push(Adjacent { node: v, edge: id });
            adjacency[v].push(Adjacent { node: u, edge: id });
        }
        Ok(Self {
            node_count,
            edges,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        self.edges[id]
    }

    pub fn neighbors(&self, node: usize) -> &[Adjacent] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Id of the edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .find(|adj| adj.node == b)
            .map(|adj| adj.edge)
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node,
                node_count: self.node_count,
            })
        }
    }

    /// FNV-1a hash over the node count and edge list. Used to detect a
    /// routing model or centrality being applied to the wrong network.
    pub fn fingerprint(&self) -> u64 {
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                hash ^= u64::from(byte);
                hash = hash.wrapping_mul(PRIME);
            }
        };
        feed(self.node_count as u64);
        for &(u, v) in &self.edges {
            feed(u as u64);
            feed(v as u64);
        }
        hash
    }

    pub(crate) fn component_count(&self) -> usize {
        let mut label = vec![usize::MAX; self.node_count];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.node_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = components;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for adj in &self.adjacency[x] {
                    if label[adj.node] == usize::MAX {
                        label[adj.node] = components;
                        queue.push_back(adj.node);
                    }
                }
            }
            components += 1;
        }
        components
    }

    /// Returns a copy with nodes renamed by `perm` (node `i` becomes
    /// `perm[i]`). Edge ids are preserved.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.node_count {
            return Err(Error::InvalidArgument(
                "permutation length differs from node count".into(),
            ));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Self::new(self.node_count, edges)
    }
}

/// Hop-count summary of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMetrics {
    /// Mean hop distance over ordered pairs.
    pub average_path_length: f64,
    pub diameter: usize,
    pub degree_sequence: Vec<usize>,
}

/// Breadth-first hop distances from `source`.
pub fn shortest_path_lengths(net: &Network, source: usize) -> Result<Vec<usize>> {
    net.check_node(source)?;
    Ok(bfs(net, source))
}

fn bfs(net: &Network, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; net.node_count()];
    let mut queue = VecDeque::with_capacity(net.node_count());
    dist[source] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        let next = dist[x] + 1;
        for adj in net.neighbors(x) {
            if dist[adj.node] == usize::MAX {
                dist[adj.node] = next;
                queue.push_back(adj.node);
            }
        }
    }
    dist
}

/// Average path length, diameter and degree sequence.
pub fn metrics(net: &Network) -> Result<GraphMetrics> {
    let n = net.node_count();
    let per_source: Vec<Option<(u64, usize)>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let dist = bfs(net, s);
            let mut sum = 0u64;
            let mut max = 0usize;
            for &d in &dist {
                if d == usize::MAX {
                    return None;
                }
                sum += d as u64;
                max = max.max(d);
            }
            Some((sum, max))
        })
        .collect();
    let mut total = 0u64;
    let mut diameter = 0;
    for entry in per_source {
        let (sum, max) = entry.ok_or(Error::Disconnected {
            components: net.component_count(),
        })?;
        total += sum;
        diameter = diameter.max(max);
    }
    Ok(GraphMetrics {
        average_path_length: total as f64 / (n as f64 * (n as f64 - 1.0)),
        diameter,
        degree_sequence: net.degrees(),
    })
}

/// Dense all-pairs hop distances. Computed on demand; `N^2` memory.
pub fn distance_matrix(net: &Network) -> Vec<Vec<usize>> {
    (0..net.node_count())
        .into_par_iter()
        .map(|s| bfs(net, s))
        .collect()
}

/// Parses a whitespace-separated `u v` edge list with 0-based ids. Blank
/// lines and `#` comments are skipped. The node count is one more than the
/// largest id seen.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Network> {
    let mut edges = Vec::new();
    let mut max_id = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let mut parse = |what: &str| -> Result<usize> {
            let field = fields.next().ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("missing {what} endpoint"),
            })?;
            field.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad node id {field:?}"),
            })
        };
        let u = parse("first")?;
        let v = parse("second")?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected exactly two fields".into(),
            });
        }
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "edge list is empty".into(),
        });
    }
    Network::new(max_id + 1, edges)
}

/// Writes the edge list format read by [`read_edge_list`]. Each entry of
/// `header` becomes a leading `#` comment line.
pub fn write_edge_list<W: Write>(net: &Network, mut out: W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for &(u, v) in net.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Small named graphs used throughout the tests and examples.
pub mod fixtures {
    use super::Network;

    pub fn path(n: usize) -> Network {
        Network::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("path graph")
    }

    pub fn cycle(n: usize) -> Network {
        Network::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle graph")
    }

    /// Star with node 0 as the centre.
    pub fn star(n: usize) -> Network {
        Network::new(n, (1..n).map(|i| (0, i)).collect()).expect("star graph")
    }

    pub fn complete(n: usize) -> Network {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Network::new(n, edges).expect("complete graph")
    }

    /// Triangle 0-1-2 with pendant 3 on node 2 and pendant 4 on node 0.
    pub fn kite() -> Network {
        Network::new(5, vec![(0, 1), (1, 2), (0, 2), (2, 3), (0, 4)]).expect("kite graph")
    }
}
