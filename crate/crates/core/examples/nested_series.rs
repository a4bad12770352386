// Nested sums of both kinds, their per-order pieces, and agreement with the
// recurrence.

use std::error::Error;

use gch::series::rw_infinite_c0;
use gch::{
    eval_qw_infinite, eval_rw_infinite, gamma_ratio, sum_series, GchParams, NestedTruncation,
    Truncation,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = GchParams::new(-2.0, 0.5, 0.5, 1.0, 1.0)?;
    let nt = NestedTruncation::default();
    let t = Truncation::default();
    let q = p.omega_cap / (2.0 * p.mu);
    let g = p.gamma();

    println!("{:>5} {:>24} {:>24} {:>10}", "x", "QW nested", "QW recurrence", "rel err");
    for x in [0.1, 0.4, 0.8, 1.2] {
        let nested = eval_qw_infinite(&p, x, &nt)?;
        let oracle = sum_series(&p, 0.0, gamma_ratio(g - q, g)?, x, &t)?;
        let rel = (nested.value - oracle.value).abs() / oracle.value.abs();
        println!("{x:>5} {:>24.16e} {:>24.16e} {rel:>10.2e}", nested.value, oracle.value);
    }

    let x = 0.8;
    let r = eval_qw_infinite(&p, x, &nt)?;
    println!("order pieces of QW({x}):");
    for (k, v) in r.order_values.iter().take(8).enumerate() {
        println!("  y_{k} = {v:+.6e}");
    }

    let rw = eval_rw_infinite(&p, x, &nt)?;
    let oracle = sum_series(&p, 1.0 - p.nu, rw_infinite_c0(&p)?, x, &t)?;
    println!("RW({x}) = {:.16e}, recurrence {:.16e}", rw.value, oracle.value);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
