// Independent checks: the ODE residual of the nested coefficients and the
// scaled Wronskian of the two kinds.

use std::error::Error;

use gch::verify::{ode_residual, wronskian_scaled};
use gch::{nested_coefficients, GchParams, NestedTruncation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GchParams::new(-1.5, 0.8, 0.5, 1.2, 0.6)?;
    for (label, lambda) in [("first kind", 0.0), ("second kind", 1.0 - p.nu)] {
        let c = nested_coefficients(&p, lambda, 1.0, None, 120)?;
        for x in [0.25, 0.5, 1.0] {
            let r = ode_residual(&c, lambda, &p, x);
            println!("{label} x = {x}: residual {:.2e} (relative {:.2e})", r.residual, r.relative());
        }
    }
    let nt = NestedTruncation::default();
    for x in [0.2, 0.6, 1.0] {
        println!("scaled Wronskian at x = {x}: {:.6e}", wronskian_scaled(&p, x, 1e-4, &nt)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
