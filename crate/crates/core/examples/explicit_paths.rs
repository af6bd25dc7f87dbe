//! Routing on a fixed path set: every pair always uses one stored path.

use netdesign::graph::fixtures::cycle;
use netdesign::{
    allocate, effective_betweenness, find_rc, Allocation, Path, PathSet, RoutingModel, SweepConfig,
};

fn main() -> netdesign::Result<()> {
    // ring of 7, every packet takes the shorter arc
    let net = cycle(7);
    let n = net.node_count();
    let mut paths = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                let ahead = (v + n - u) % n;
                let step = if ahead <= n / 2 { 1 } else { n - 1 };
                let nodes: Vec<usize> = (0..)
                    .map(|i| (u + i * step) % n)
                    .take_while(|&x| x != v)
                    .chain([v])
                    .collect();
                paths.push(Path::new(&net, &nodes)?);
            }
        }
    }
    let set = PathSet::new(&net, paths)?;
    println!("ring-7: max occupancy {}", set.max_occ());

    let model = RoutingModel::from_path_set(&net, set)?;
    let b = effective_betweenness(&net, &model)?;
    let alloc = allocate(&net, None, Allocation::Uc)?;
    let rc = netdesign::analytic_rc(&net, &alloc, &b)?;
    let found = find_rc(&net, &model, &alloc, &SweepConfig::new(0))?;
    println!("analytic R_c {rc:.2}, simulated {}", found.rate);
    Ok(())
}
