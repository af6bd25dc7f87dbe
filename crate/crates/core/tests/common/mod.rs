//! Brute-force references shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;

use netdesign::graph::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected graph on `n` nodes: a random recursive tree plus `extra`
/// random non-tree edges (fewer if the graph fills up).
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    let max_edges = n * (n - 1) / 2;
    let mut added = 0;
    let mut tries = 0;
    while added < extra && edges.len() < max_edges && tries < 10_000 {
        tries += 1;
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v || edges.contains(&(u, v)) || edges.contains(&(v, u)) {
            continue;
        }
        edges.push((u, v));
        added += 1;
    }
    Network::new(n, edges).expect("tree plus extras is simple and connected")
}

/// Adjacency matrix view for the oracles.
fn adjacency(net: &Network) -> Vec<Vec<bool>> {
    let n = net.node_count();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in net.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

/// Every simple path from `s` to `t`, as node sequences.
pub fn simple_paths(net: &Network, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(
        adj: &[Vec<bool>],
        t: usize,
        path: &mut Vec<usize>,
        seen: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = *path.last().unwrap();
        if x == t {
            out.push(path.clone());
            return;
        }
        for y in 0..adj.len() {
            if adj[x][y] && !seen[y] {
                seen[y] = true;
                path.push(y);
                walk(adj, t, path, seen, out);
                path.pop();
                seen[y] = false;
            }
        }
    }
    let adj = adjacency(net);
    let mut seen = vec![false; net.node_count()];
    seen[s] = true;
    let mut out = Vec::new();
    walk(&adj, t, &mut vec![s], &mut seen, &mut out);
    out
}

fn edge_index(net: &Network) -> impl Fn(usize, usize) -> usize + '_ {
    move |a, b| {
        net.edges()
            .iter()
            .position(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a))
            .expect("consecutive path nodes are adjacent")
    }
}

/// Per-edge load when every ordered pair sends one unit split evenly over
/// its minimum-cost simple paths. `cost` prices a whole path.
pub fn oracle_betweenness(net: &Network, cost: impl Fn(&[usize]) -> u64) -> Vec<f64> {
    let n = net.node_count();
    let idx = edge_index(net);
    let mut load = vec![0.0; net.edge_count()];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let paths = simple_paths(net, s, t);
            let best = paths.iter().map(|p| cost(p)).min().unwrap();
            let chosen: Vec<_> = paths.iter().filter(|p| cost(p) == best).collect();
            let share = 1.0 / chosen.len() as f64;
            for p in chosen {
                for w in p.windows(2) {
                    load[idx(w[0], w[1])] += share;
                }
            }
        }
    }
    load
}

pub fn hop_cost(p: &[usize]) -> u64 {
    p.len() as u64 - 1
}

/// Sum of the degrees of every node on the path except the last.
pub fn degree_sum_cost(net: &Network) -> impl Fn(&[usize]) -> u64 + '_ {
    move |p| p[..p.len() - 1].iter().map(|&x| net.degree(x) as u64).sum()
}

/// Smallest achievable maximum edge occupancy when every ordered pair uses
/// exactly one simple path, solved exactly as an integer program over how
/// many pairs of each interchangeable group take each of their simple paths.
pub fn exhaustive_minmax(net: &Network) -> u64 {
    use good_lp::{constraint, variable, variables, Expression, Solution, SolverModel};

    let n = net.node_count();
    let m = net.edge_count();
    let idx = edge_index(net);
    let mut groups: HashMap<Vec<Vec<usize>>, u64> = HashMap::new();
    for s in 0..n {
        for t in 0..n {
            if s != t {
                let mut opts: Vec<Vec<usize>> = simple_paths(net, s, t)
                    .iter()
                    .map(|p| {
                        let mut e: Vec<usize> = p.windows(2).map(|w| idx(w[0], w[1])).collect();
                        e.sort_unstable();
                        e
                    })
                    .collect();
                opts.sort();
                opts.dedup();
                *groups.entry(opts).or_default() += 1;
            }
        }
    }
    let mut groups: Vec<(Vec<Vec<usize>>, u64)> = groups.into_iter().collect();
    groups.sort();

    let mut vars = variables!();
    let z = vars.add(variable().min(0));
    let counts: Vec<Vec<_>> = groups
        .iter()
        .map(|(opts, c)| {
            opts.iter()
                .map(|_| vars.add(variable().integer().min(0).max(*c as f64)))
                .collect()
        })
        .collect();
    let mut model = vars.minimise(z).using(good_lp::microlp);
    let mut load: Vec<Expression> = vec![Expression::from(0.0); m];
    for ((opts, c), xs) in groups.iter().zip(&counts) {
        let total: Expression = xs.iter().copied().sum();
        model = model.with(constraint!(total == *c as f64));
        for (path, &x) in opts.iter().zip(xs) {
            for &e in path {
                load[e] += x;
            }
        }
    }
    for l in load {
        model = model.with(constraint!(l <= z));
    }
    let solution = model.solve().expect("integer program solves");
    solution.value(z).round() as u64
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-300))
        .fold(0.0, f64::max)
}
