// Sweeps the default parameter grid and compares the nested sums with the
// plain recurrence at every point.

use std::error::Error;

use gch::verify::{cross_validate, ParamGrid};
use gch::{NestedTruncation, Truncation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = ParamGrid::default();
    let report = cross_validate(&grid, &Truncation::default(), &NestedTruncation::default());

    println!(
        "{} grid points, {} evaluated, {} rejected",
        report.records.len(),
        report.evaluated(),
        report.failures().count()
    );
    println!("max relative error: {:.3e}", report.max_rel_err);
    if let Some(i) = report.worst {
        let w = &report.records[i];
        println!("worst point: {:?} {} x = {}", w.params, w.kind, w.x);
    }

    // fewer transcendent orders can only lose accuracy
    for n in [6, 10, 20] {
        let nt = NestedTruncation {
            max_order_n: n,
            ..NestedTruncation::default()
        };
        let r = cross_validate(&grid, &Truncation::default(), &nt);
        println!("max_order_n = {n:>2}: max relative error {:.3e}", r.max_rel_err);
    }

    if report.max_rel_err > 1e-9 {
        return Err(format!("cross-validation error {:.3e} above 1e-9", report.max_rel_err).into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
