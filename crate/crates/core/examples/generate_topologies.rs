//! Generates one instance of every family and prints its basic shape.
//!
//! ```text
//! cargo run --release --example generate_topologies -- 1200 7
//! ```

use netdesign::{metrics, Family};

fn main() -> netdesign::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args
        .next()
        .map_or(Ok(400), |a| a.parse())
        .expect("node count");
    let seed: u64 = args.next().map_or(Ok(0), |a| a.parse()).expect("seed");

    println!(
        "{:<5} {:>6} {:>6} {:>8} {:>6} {:>8}",
        "family", "N", "M", "L", "diam", "max deg"
    );
    for family in Family::ALL {
        let spec = family.default_spec(n);
        let net = spec.generate(seed)?;
        let m = metrics(&net)?;
        let max_degree = m.degree_sequence.iter().max().copied().unwrap_or(0);
        println!(
            "{:<6} {:>6} {:>6} {:>8.3} {:>6} {:>8}",
            family.name(),
            net.node_count(),
            net.edge_count(),
            m.average_path_length,
            m.diameter,
            max_degree
        );
    }

    // the same spec and seed always give the same graph
    let spec = Family::Ba.default_spec(n);
    assert_eq!(spec.generate(seed)?.edges(), spec.generate(seed)?.edges());
    println!("\n{}", spec.describe(seed));
    Ok(())
}
