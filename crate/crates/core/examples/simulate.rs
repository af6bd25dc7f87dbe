//! Packet simulation: order parameter around the critical rate and the
//! simulated critical-rate search.

use netdesign::{
    find_rc, simulate, Designer, Family, RoutingModel, Scheme, SimulationConfig, SweepConfig,
};

fn main() -> netdesign::Result<()> {
    let net = Family::Er.default_spec(200).generate(3)?;
    let designer = Designer::new(&net, "er-200", Some(3));

    for scheme in [Scheme::UC_SPR, Scheme::BC_SPR] {
        let analytic = designer.design_point(scheme)?.r_c;
        let alloc = designer.allocation(scheme)?;
        let model = RoutingModel::build(&net, scheme.routing);
        println!("{scheme}: analytic R_c {analytic:.1}");

        for factor in [0.5, 0.9, 1.1, 2.0] {
            let rate = (factor * analytic).round() as u32;
            let est = simulate(&net, &model, &alloc, &SimulationConfig::new(rate, 1))?;
            println!(
                "  R = {rate:>4}: eta {:.4}, queued at end {}, delivered {}",
                est.eta, est.in_flight, est.delivered
            );
        }

        let found = find_rc(&net, &model, &alloc, &SweepConfig::new(1))?;
        println!(
            "  simulated R_c {} after {} probes ({:.2} x analytic)\n",
            found.rate,
            found.probes.len(),
            f64::from(found.rate) / analytic
        );
    }
    Ok(())
}
