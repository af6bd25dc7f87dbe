//! Critical rates and capacity cost of every family and design, averaged
//! over instances, written as CSV.
//!
//! ```text
//! cargo run --release --example reproduce_table -- 1200 10 out/table
//! ```

use std::path::PathBuf;

use netdesign::experiment::write_table;
use netdesign::{run_table, ExperimentPlan, Family, Scheme};

fn main() -> netdesign::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args
        .next()
        .map_or(Ok(300), |a| a.parse())
        .expect("node count");
    let instances: usize = args
        .next()
        .map_or(Ok(3), |a| a.parse())
        .expect("instance count");
    let out = args.next().map(PathBuf::from);

    let specs = Family::ALL.iter().map(|f| f.default_spec(n)).collect();
    let plan = ExperimentPlan::new(specs, instances, Scheme::REFERENCE.to_vec());
    let report = run_table(&plan)?;

    print!("{:<10}", "");
    for family in Family::ALL {
        print!("{:>16}", family.name());
    }
    println!();
    for scheme in Scheme::REFERENCE {
        print!("{:<10}", scheme.to_string());
        for family in Family::ALL {
            let cell = report.cell(&format!("{family}-{n}"), scheme);
            match cell.and_then(|c| Some((c.analytic_rc?, c.c_max?))) {
                Some((rc, c)) => print!("{:>9.1} ({:>4.1})", rc.mean, c.mean),
                None => print!("{:>16}", "failed"),
            }
        }
        println!();
    }

    if let Some(dir) = out {
        write_table(&report, &dir)?;
        println!("\nwritten to {}", dir.display());
    }
    Ok(())
}
