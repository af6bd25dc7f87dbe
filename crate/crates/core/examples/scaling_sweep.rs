//! Power-law growth of the maximal betweenness with network size.

use netdesign::experiment::Quantity;
use netdesign::{run_scaling, ExperimentPlan, Family, Scheme};

fn main() -> netdesign::Result<()> {
    let sizes = [200, 400, 800, 1600];
    let families = [Family::Ba, Family::Er, Family::Ws];
    let specs = families
        .iter()
        .flat_map(|f| sizes.iter().map(move |&n| f.default_spec(n)))
        .collect();
    let plan = ExperimentPlan::new(specs, 3, vec![Scheme::UC_SPR, Scheme::BC_SPR]);
    let report = run_scaling(&plan)?;

    for family in families {
        print!("{family}:");
        for q in [
            Quantity::BMax,
            Quantity::BEfrMax,
            Quantity::Rc {
                scheme: Scheme::UC_SPR,
            },
            Quantity::CMax {
                scheme: Scheme::BC_SPR,
            },
        ] {
            if let Some(fit) = report.fit(family.name(), q) {
                print!("  {q} ~ N^{:.2}", fit.exponent);
            }
        }
        println!();
    }
    Ok(())
}
