// B-terminated solutions: choosing Omega from an integer beta_0 cuts the
// order-0 chain, and the beta sequence of every higher order follows.

use std::error::Error;

use gch::spectra::terminating_omega;
use gch::{
    betas_from_omega, detect_termination, eval_general, eval_qw_poly, gamma_ratio, GchParams,
    NestedTruncation,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let nt = NestedTruncation::default();
    let base = GchParams::new(-1.0, 0.0, 1.5, 0.0, 0.4)?;
    for beta0 in 0..4u32 {
        let p = base.with_omega_cap(terminating_omega(&base, 0.0, 0, beta0));
        let betas = betas_from_omega(&p, 0.0, 6)?;
        let v = eval_qw_poly(&p, &betas, 1.0, &nt)?;
        let general = eval_general(&p, 0.0, gamma_ratio(p.gamma() + beta0 as f64, p.gamma())?, 1.0, &nt)?;
        println!(
            "beta_0 = {beta0}: Omega = {:>4}, n* = {:?}, betas {:?}, QW(1) = {:+.12e} (general {:+.12e})",
            p.omega_cap,
            detect_termination(&p, 0.0),
            betas.betas,
            v.value,
            general.value
        );
    }

    // with epsilon != 0 the higher orders still contribute
    let p = GchParams::new(-1.0, 0.6, 1.5, 0.0, 0.4)?;
    let p = p.with_omega_cap(terminating_omega(&p, 0.0, 0, 2));
    let betas = betas_from_omega(&p, 0.0, 6)?;
    let v = eval_qw_poly(&p, &betas, 1.0, &nt)?;
    println!("epsilon = 0.6: QW(1) = {:+.12e}, order pieces {:?}", v.value, &v.order_values[..4]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
