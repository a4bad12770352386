// With epsilon = 0 only the order-0 piece survives and the first-kind series
// collapses to a scaled Kummer function of z = -mu x^2 / 2.

use std::error::Error;

use gch::verify::kummer_oracle;
use gch::{eval_qw_infinite, gamma_ratio, GchParams, NestedTruncation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let nt = NestedTruncation::default();
    let mut worst = 0.0f64;
    for (mu, nu, omega_cap) in [(-2.0, 0.5, 1.0), (1.0, 1.5, -3.0), (-0.5, 2.5, 0.7), (3.0, 0.8, 2.0)] {
        let p = GchParams::new(mu, 0.0, nu, omega_cap, 0.3)?;
        let q = omega_cap / (2.0 * mu);
        let g = p.gamma();
        for x in [0.3, 1.0, 1.7] {
            let z = -mu * x * x / 2.0;
            let nested = eval_qw_infinite(&p, x, &nt)?.value;
            let kummer = gamma_ratio(g - q, g)? * kummer_oracle(q, g, z)?;
            let rel = (nested - kummer).abs() / kummer.abs();
            worst = worst.max(rel);
            println!("mu {mu:>4} nu {nu:>3} x {x:>3}: {nested:+.16e} vs {kummer:+.16e} ({rel:.1e})");
        }
    }
    println!("largest relative difference {worst:.2e}");
    if worst > 1e-12 {
        return Err(format!("Kummer reduction off by {worst:.2e}").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
