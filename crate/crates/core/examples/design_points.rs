//! Capacity cost and critical rate of the four bandwidth/routing designs.

use netdesign::{Designer, Family, Scheme};

fn main() -> netdesign::Result<()> {
    let n = 1200;
    for family in Family::ALL {
        let net = family.default_spec(n).generate(0)?;
        let designer = Designer::new(&net, family.name(), Some(0));
        println!("{family}-{n}: bound 2M/L = {:.1}", designer.theorem_bound());
        for scheme in Scheme::REFERENCE {
            let p = designer.design_point(scheme)?;
            println!(
                "  {:<8} C_max {:>6.2}  R_c {:>7.1}  ({:.0}% of bound)",
                scheme.to_string(),
                p.c_max,
                p.r_c,
                100.0 * p.r_c / p.theorem_bound
            );
        }
    }
    Ok(())
}
