//! Edge betweenness under shortest-path and minimum-degree-sum routing.

use netdesign::graph::fixtures::kite;
use netdesign::routing::build_efr;
use netdesign::{betweenness, betweenness_oracle, effective_betweenness, Family, RoutingKind};

fn main() -> netdesign::Result<()> {
    // on a tiny graph the fast algorithm agrees with path enumeration
    let net = kite();
    let model = build_efr(&net);
    let fast = effective_betweenness(&net, &model)?;
    let slow = betweenness_oracle(&net, &model)?;
    for (e, &(u, v)) in net.edges().iter().enumerate() {
        println!(
            "kite {u}-{v}: {:.3} (enumerated {:.3})",
            fast.value(e),
            slow.value(e)
        );
    }

    let net = Family::Ba.default_spec(1000).generate(1)?;
    let n = net.node_count() as f64;
    for kind in [RoutingKind::Spr, RoutingKind::Efr] {
        let b = betweenness(&net, kind);
        let (u, v) = net.edge(b.argmax());
        println!(
            "\n{kind}: B_max {:.0} on {u}-{v} (degrees {} and {}), mean path length {:.3}",
            b.b_max(),
            net.degree(u),
            net.degree(v),
            b.total() / (n * (n - 1.0))
        );
        let mut order: Vec<usize> = (0..net.edge_count()).collect();
        order.sort_by(|&a, &b2| b.value(b2).total_cmp(&b.value(a)));
        for &e in order.iter().take(5) {
            let (u, v) = net.edge(e);
            println!("  {u:>4}-{v:<4} {:>10.0}", b.value(e));
        }
    }
    Ok(())
}
