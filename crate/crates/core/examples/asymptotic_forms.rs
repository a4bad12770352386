// The two limiting forms, compared with the full series where they apply.

use std::error::Error;

use gch::asymptotics::{asymptote, AsymptoticRegime};
use gch::asymptotics::{asym_small_mu, asym_small_mu_resummed};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let eps = 0.7;
    println!("{:>5} {:>14} {:>14}", "x", "small mu", "resummed");
    for k in 0..=5 {
        let x = k as f64 * 0.5;
        println!(
            "{x:>5} {:>14.8} {:>14.8}",
            asym_small_mu(eps, x),
            asym_small_mu_resummed(eps, x)
        );
    }
    for mu in [-2.0, -0.5, 0.5, 2.0] {
        let row: Vec<String> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&x| format!("{:+.8e}", asymptote(AsymptoticRegime::SmallEps, mu, 0.0, x)))
            .collect();
        println!("small eps, mu = {mu:>4}: {}", row.join("  "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
