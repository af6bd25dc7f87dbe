//! Greedy min-max routing: flatten the busiest edge by swapping single
//! paths from a candidate pool.

use netdesign::graph::fixtures::kite;
use netdesign::{
    greedy_minmax, Designer, Family, PathPool, PathSet, PoolConfig, RoutingKind, Scheme,
};

fn main() -> netdesign::Result<()> {
    let net = kite();
    let pool = PathPool::exhaustive(&net)?;
    let init = PathSet::first_candidates(&net, RoutingKind::Spr);
    let out = greedy_minmax(&net, &pool, &init)?;
    println!(
        "kite: max occupancy {} -> {}",
        out.initial_max_occ,
        out.paths.max_occ()
    );

    let net = Family::Ws.default_spec(150).generate(2)?;
    let pool = PathPool::build(&net, PoolConfig::default())?;
    println!("ws-150: pool of {} paths", pool.size());
    for kind in [RoutingKind::Spr, RoutingKind::Efr] {
        let init = PathSet::first_candidates(&net, kind);
        let out = greedy_minmax(&net, &pool, &init)?;
        println!(
            "  from {kind}: max occupancy {} -> {} in {} passes, {} replacements",
            out.initial_max_occ,
            out.paths.max_occ(),
            out.passes,
            out.replacements
        );
    }

    // with uniform bandwidth the critical rate is 2N(N-1)/max occupancy
    let init = PathSet::first_candidates(&net, RoutingKind::Spr);
    let best = greedy_minmax(&net, &pool, &init)?.paths;
    let n = net.node_count() as f64;
    let designer = Designer::new(&net, "ws-150", Some(2));
    println!(
        "  R_c: uc-spr {:.1}, greedy {:.1}, bound {:.1}",
        designer.design_point(Scheme::UC_SPR)?.r_c,
        2.0 * n * (n - 1.0) / best.max_occ() as f64,
        designer.theorem_bound()
    );

    let mut text = Vec::new();
    best.write(&mut text)?;
    let back = PathSet::read(&net, text.as_slice())?;
    assert_eq!(back.max_occ(), best.max_occ());
    Ok(())
}
