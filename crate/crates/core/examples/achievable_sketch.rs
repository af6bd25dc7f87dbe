//! Design points that outline the achievable (C_max, R_c) area of one
//! network, as plot-ready CSV on stdout.

use netdesign::experiment::{greedy_paths, write_sketch};
use netdesign::{emit_achievable_sketch, Family, PoolConfig, Scheme};

fn main() -> netdesign::Result<()> {
    let net = Family::Ba.default_spec(120).generate(4)?;
    let greedy = greedy_paths(
        &net,
        PoolConfig {
            yen_k: 4,
            ..PoolConfig::default()
        },
    )?;
    let points = emit_achievable_sketch(&net, "ba-120", &Scheme::REFERENCE, Some(&greedy))?;
    write_sketch(&points, std::io::stdout().lock())
}
