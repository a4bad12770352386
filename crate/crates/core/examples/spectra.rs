// Eigenvalue ladders of the three mapped systems, from the closed forms and
// from the terminating Omega.

use std::error::Error;

use gch::spectra::{spectrum, QuantumSystem};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let systems = [
        QuantumSystem::RotatingOscillator { l: 1, omega_c: 2.0 },
        QuantumSystem::Confinement {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            mass: 0.5,
            l: 0,
        },
        QuantumSystem::QQbar {
            m_q: 0.3,
            b_slope: 1.0,
            l: 0,
        },
    ];
    for system in &systems {
        println!("{} ({:?})", system.name(), system.map()?);
        for s in spectrum(system, 1, 3)? {
            let via_omega = system.eigenvalue_from_omega(s.gch.omega_cap)?;
            println!(
                "  i = {} beta = {}: {:>12.8}  (from Omega {:>12.8})",
                s.i, s.beta_i, s.eigenvalue, via_omega
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
