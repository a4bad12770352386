// Radial wavefunctions of the three mapped systems: small-r power law,
// behaviour at r = 20, and the normalization constant where it exists.

use std::error::Error;

use gch::spectra::{normalize, wavefunction, QuantumSystem};
use gch::NestedTruncation;

fn systems() -> Vec<QuantumSystem> {
    vec![
        QuantumSystem::RotatingOscillator { l: 0, omega_c: 2.0 },
        QuantumSystem::Confinement {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            mass: 0.5,
            l: 0,
        },
        QuantumSystem::QQbar {
            m_q: 0.5,
            b_slope: 1.0,
            l: 1,
        },
        QuantumSystem::QQbar {
            m_q: 0.0,
            b_slope: 1.0,
            l: 1,
        },
    ]
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let nt = NestedTruncation::default();
    for system in systems() {
        println!("{system:?}");
        for beta in 0..=3 {
            let state = system.eigenstate(0, beta)?;
            let psi = |r: f64| wavefunction(&system, &state, r, &nt);
            let slope = (psi(1e-3)?.abs().ln() - psi(1e-4)?.abs().ln()) / 10f64.ln();
            let peak = (1..=2000)
                .map(|k| psi(k as f64 * 0.01).map(f64::abs))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(0.0f64, f64::max);
            let tail = psi(20.0)?.abs() / peak;
            let norm = match normalize(&system, &state, 20.0, 4000) {
                Ok(n) => format!("{n:.6e}"),
                Err(e) => format!("unavailable ({e})"),
            };
            println!(
                "  beta = {beta}: eigenvalue {:>8.4}  slope {slope:.4} (envelope power {})  |psi(20)|/peak {tail:.3e}  N {norm}",
                state.eigenvalue,
                system.r_exponent()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
