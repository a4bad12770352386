// The three-term recurrence on its own: coefficients, a truncated sum, and
// detection of the index where the series stops.

use std::error::Error;

use gch::{coefficients, detect_termination, indicial_roots, sum_series, GchParams, Truncation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GchParams::new(-1.0, 0.5, 1.5, 2.0, 0.25)?;
    let (r0, r1) = indicial_roots(p.nu);
    println!("indicial roots: {r0}, {r1}");

    let c = coefficients(&p, 0.0, 1.0, 8)?;
    for (n, cn) in c.iter().enumerate() {
        println!("c_{n} = {cn:+.12e}");
    }

    let t = Truncation::default();
    let r = sum_series(&p, 0.0, 1.0, 0.5, &t)?;
    println!(
        "y(0.5) = {:.15e} after {} terms (last term {:.1e}, converged {})",
        r.value, r.terms_used, r.last_term_mag, r.converged
    );

    // Omega = -mu (2 beta + lambda) switches off the B channel at n* = 2 beta + 1
    for beta in 0..4 {
        let q = p.with_omega_cap(-p.mu * 2.0 * beta as f64);
        println!("beta = {beta}: B vanishes at n* = {:?}", detect_termination(&q, 0.0));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
