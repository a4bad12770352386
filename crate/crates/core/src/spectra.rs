//! Three radial problems whose reduced equations are GCH equations: a
//! rotating harmonic oscillator, a Cornell-type confinement potential and a
//! scalar-confined quark-antiquark pair.
//!
//! Each system maps to [`GchParams`] through a change of variable `x = s r`
//! and an envelope `Psi(r) = env(r) y(x)`. Bound states are the B-terminated
//! ones, `Omega = -mu (2 beta_i + i)` at the first-kind root `lambda = 0`.
//!
//! Units: `hbar = 1`. For the confinement system put back `hbar` by
//! replacing `mass` with `mass / hbar^2` in `alpha_F`, `beta_F` and the
//! energy prefactor.

use serde::{Deserialize, Serialize};

use crate::error::{GchError, Result};
use crate::gamma::gamma_ratio;
use crate::params::{GchParams, SolutionKind};
use crate::recurrence::EvalResult;
use crate::series::{betas_from_omega, eval_general, eval_qw_poly, NestedTruncation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "snake_case")]
pub enum QuantumSystem {
    /// `Psi'' + ((2 lambda_m + 1)/(2 omega_c) - (r-1)^2/(4 omega_c^2) - l(l+1)/r^2) Psi = 0`
    RotatingOscillator { l: u32, omega_c: f64 },
    /// `Psi'' + (2 mass (E + a/r - b r - c r^2) - l(l+1)/r^2) Psi = 0`
    Confinement {
        a: f64,
        b: f64,
        c: f64,
        mass: f64,
        l: u32,
    },
    /// `H^2 = 4 ((m_q + b_slope r / 2)^2 + P_r^2 + l(l+1)/r^2)`
    QQbar { m_q: f64, b_slope: f64, l: u32 },
}

/// One bound state of a system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenState {
    /// Termination order.
    pub i: u32,
    pub beta_i: u32,
    /// `lambda_m`, `E` or `E^2` depending on the system.
    pub eigenvalue: f64,
    /// Mapped parameters with `Omega` fixed by `(i, beta_i)`.
    pub gch: GchParams,
    pub lambda: f64,
}

/// Confinement map together with the two scales it introduces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfinementMap {
    pub alpha_f: f64,
    pub beta_f: f64,
    pub params: GchParams,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(GchError::Domain(format!("{name} must be positive and finite (got {v})")))
    }
}

/// `mu = -2`, `eps = sqrt(2/omega_c)`, `nu = 2(l+1)`, `omega = l+1`; `Omega`
/// is left at 0 until a state fixes it.
pub fn map_oscillator(l: u32, omega_c: f64) -> Result<GchParams> {
    positive("omega_c", omega_c)?;
    let l1 = l as f64 + 1.0;
    GchParams::new(-2.0, (2.0 / omega_c).sqrt(), 2.0 * l1, 0.0, l1)
}

/// `lambda_m = 2 beta_i + l + 1 + i`.
pub fn eigen_oscillator(l: u32, i: u32, beta_i: u32) -> f64 {
    2.0 * beta_i as f64 + l as f64 + 1.0 + i as f64
}

/// `alpha_F = sqrt(2 mass c)`, `beta_F = b sqrt(mass / 2c)`, then
/// `mu = -2`, `eps = -2 beta_F / sqrt(alpha_F)`, `nu = 2(l+1)`,
/// `omega = -mass a / beta_F + l + 1`.
pub fn map_confinement(a: f64, b: f64, c: f64, mass: f64, l: u32) -> Result<ConfinementMap> {
    positive("c", c)?;
    positive("mass", mass)?;
    if !a.is_finite() || !b.is_finite() {
        return Err(GchError::Domain(format!(
            "confinement couplings must be finite (a = {a}, b = {b})"
        )));
    }
    if b == 0.0 {
        return Err(GchError::DegenerateCoupling(
            "b = 0 gives beta_F = 0, and omega = -mass a / beta_F + l + 1 is undefined",
        ));
    }
    let alpha_f = (2.0 * mass * c).sqrt();
    let beta_f = b * (mass / (2.0 * c)).sqrt();
    let l1 = l as f64 + 1.0;
    let params = GchParams::new(
        -2.0,
        -2.0 * beta_f / alpha_f.sqrt(),
        2.0 * l1,
        0.0,
        -mass * a / beta_f + l1,
    )?;
    Ok(ConfinementMap {
        alpha_f,
        beta_f,
        params,
    })
}

/// `E = (4 alpha_F (beta_i + (i + l + 3/2)/2) - beta_F^2) / (2 mass)`.
pub fn energy_confinement(alpha_f: f64, beta_f: f64, mass: f64, l: u32, i: u32, beta_i: u32) -> f64 {
    let inner = beta_i as f64 + 0.5 * (i as f64 + l as f64 + 1.5);
    (4.0 * alpha_f * inner - beta_f * beta_f) / (2.0 * mass)
}

/// `mu = -b_slope`, `eps = -2 m_q`, `nu = 2(l+1)`, `omega = l+1`.
pub fn map_qqbar(m_q: f64, b_slope: f64, l: u32) -> Result<GchParams> {
    positive("b_slope", b_slope)?;
    if !(m_q.is_finite() && m_q >= 0.0) {
        return Err(GchError::Domain(format!(
            "quark mass must be nonnegative and finite (got {m_q})"
        )));
    }
    let l1 = l as f64 + 1.0;
    GchParams::new(-b_slope, -2.0 * m_q, 2.0 * l1, 0.0, l1)
}

/// `E^2 = 4 b_slope (2 beta_i + i + l + 3/2)`.
pub fn energy_qqbar(b_slope: f64, l: u32, i: u32, beta_i: u32) -> f64 {
    4.0 * b_slope * (2.0 * beta_i as f64 + i as f64 + l as f64 + 1.5)
}

/// `Omega = -mu (2 beta_i + i + lambda)`.
pub fn terminating_omega(p: &GchParams, lambda: f64, i: u32, beta_i: u32) -> f64 {
    -p.mu * (2.0 * beta_i as f64 + i as f64 + lambda)
}

impl QuantumSystem {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RotatingOscillator { .. } => "oscillator",
            Self::Confinement { .. } => "confinement",
            Self::QQbar { .. } => "qqbar",
        }
    }

    pub fn l(&self) -> u32 {
        match *self {
            Self::RotatingOscillator { l, .. } | Self::Confinement { l, .. } | Self::QQbar { l, .. } => l,
        }
    }

    /// Mapped parameters with `Omega = 0`.
    pub fn map(&self) -> Result<GchParams> {
        match *self {
            Self::RotatingOscillator { l, omega_c } => map_oscillator(l, omega_c),
            Self::Confinement { a, b, c, mass, l } => map_confinement(a, b, c, mass, l).map(|m| m.params),
            Self::QQbar { m_q, b_slope, l } => map_qqbar(m_q, b_slope, l),
        }
    }

    /// Closed-form eigenvalue for `(i, beta_i)`.
    pub fn eigenvalue(&self, i: u32, beta_i: u32) -> Result<f64> {
        match *self {
            Self::RotatingOscillator { l, omega_c } => {
                positive("omega_c", omega_c)?;
                Ok(eigen_oscillator(l, i, beta_i))
            }
            Self::Confinement { a, b, c, mass, l } => {
                let m = map_confinement(a, b, c, mass, l)?;
                Ok(energy_confinement(m.alpha_f, m.beta_f, mass, l, i, beta_i))
            }
            Self::QQbar { m_q, b_slope, l } => {
                map_qqbar(m_q, b_slope, l)?;
                Ok(energy_qqbar(b_slope, l, i, beta_i))
            }
        }
    }

    /// Eigenvalue read back from an `Omega` through the inverse of each
    /// system's `Omega` correspondence.
    pub fn eigenvalue_from_omega(&self, omega_cap: f64) -> Result<f64> {
        let l = self.l() as f64;
        match *self {
            // Omega = 2 (lambda_m - l - 1)
            Self::RotatingOscillator { .. } => Ok(0.5 * omega_cap + l + 1.0),
            // Omega = (beta_F^2 + 2 mass E) / alpha_F - 2 (l + 3/2)
            Self::Confinement { a, b, c, mass, l: li } => {
                let m = map_confinement(a, b, c, mass, li)?;
                let eps_f = m.alpha_f * (omega_cap + 2.0 * (l + 1.5));
                Ok((eps_f - m.beta_f * m.beta_f) / (2.0 * mass))
            }
            // Omega = E^2/4 - b (l + 3/2)
            Self::QQbar { b_slope, .. } => Ok(4.0 * (omega_cap + b_slope * (l + 1.5))),
        }
    }

    /// Bound state `(i, beta_i)` on the first-kind root.
    pub fn eigenstate(&self, i: u32, beta_i: u32) -> Result<EigenState> {
        let base = self.map()?;
        let lambda = SolutionKind::FirstKind.lambda_of(base.nu);
        let gch = base.with_omega_cap(terminating_omega(&base, lambda, i, beta_i));
        Ok(EigenState {
            i,
            beta_i,
            eigenvalue: self.eigenvalue(i, beta_i)?,
            gch,
            lambda,
        })
    }

    /// Scale `s` in `x = s r`.
    pub fn x_scale(&self) -> Result<f64> {
        match *self {
            Self::RotatingOscillator { omega_c, .. } => {
                positive("omega_c", omega_c)?;
                Ok(1.0 / (2.0 * omega_c).sqrt())
            }
            Self::Confinement { a, b, c, mass, l } => Ok(map_confinement(a, b, c, mass, l)?.alpha_f.sqrt()),
            Self::QQbar { .. } => Ok(1.0),
        }
    }

    /// Power of `r` in the envelope.
    pub fn r_exponent(&self) -> u32 {
        match *self {
            Self::RotatingOscillator { l, .. } | Self::Confinement { l, .. } => l + 1,
            Self::QQbar { l, .. } => l,
        }
    }

    /// `ln` of the envelope without its power of `r`.
    fn log_gauss(&self, r: f64) -> Result<f64> {
        Ok(match *self {
            // exp(-(r-1)^2 / (4 omega_c)); with 2 omega_c in the denominator the
            // reduced equation picks up x^3 terms and is no longer of GCH form
            Self::RotatingOscillator { omega_c, .. } => -(r - 1.0) * (r - 1.0) / (4.0 * omega_c),
            Self::Confinement { a, b, c, mass, l } => {
                let m = map_confinement(a, b, c, mass, l)?;
                -0.5 * m.alpha_f * r * r - m.beta_f * r
            }
            Self::QQbar { m_q, b_slope, .. } => {
                let s = r + 2.0 * m_q / b_slope;
                -0.25 * b_slope * s * s
            }
        })
    }

    /// Envelope `r^p exp(...)` multiplying `y(x)`.
    pub fn envelope(&self, r: f64) -> Result<f64> {
        Ok(r.powi(self.r_exponent() as i32) * self.log_gauss(r)?.exp())
    }
}

fn check_state(system: &QuantumSystem, state: &EigenState) -> Result<()> {
    let expect = system.eigenstate(state.i, state.beta_i)?;
    if expect.gch != state.gch || expect.lambda != state.lambda {
        return Err(GchError::Domain(format!(
            "state (i = {}, beta_i = {}) does not belong to the {} system as given",
            state.i,
            state.beta_i,
            system.name()
        )));
    }
    Ok(())
}

/// First-kind factor `y(x)` of a bound state.
///
/// When `2 beta_i + i` is even, `beta_0` is an integer and the series is the
/// B-terminated form normalized by `Gamma(gamma + beta_0) / Gamma(gamma)`.
/// Otherwise no order-0 chain terminates and `c0 = 1` is used.
pub fn radial_factor(state: &EigenState, x: f64, nt: &NestedTruncation) -> Result<EvalResult> {
    let level = 2 * state.beta_i + state.i;
    if level % 2 == 0 {
        let betas = betas_from_omega(&state.gch, state.lambda, nt.max_order_n + 1)?;
        eval_qw_poly(&state.gch, &betas, x, nt)
    } else {
        eval_general(&state.gch, state.lambda, 1.0, x, nt)
    }
}

/// `c0` used by [`radial_factor`].
pub fn radial_c0(state: &EigenState) -> Result<f64> {
    let level = 2 * state.beta_i + state.i;
    if level % 2 == 0 {
        let g = state.gch.gamma();
        gamma_ratio(g + (level / 2) as f64, g)
    } else {
        Ok(1.0)
    }
}

/// Unnormalized radial wavefunction `env(r) y(s r)`.
pub fn wavefunction(
    system: &QuantumSystem,
    state: &EigenState,
    r: f64,
    nt: &NestedTruncation,
) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(GchError::Domain(format!("r must be positive and finite (got {r})")));
    }
    check_state(system, state)?;
    let x = system.x_scale()? * r;
    let y = radial_factor(state, x, nt)?.value;
    Ok(system.envelope(r)? * y)
}

/// Largest `|Psi(r_max)| / max |Psi|` accepted by [`normalize`].
pub const TAIL_RATIO: f64 = 1e-10;

/// `1 / sqrt(int_0^{r_max} f(r)^2 r^2 dr)` by composite Simpson on
/// `n_points` intervals (rounded up to even), after checking that `f` has
/// decayed at `r_max`.
pub fn normalize_fn(f: impl Fn(f64) -> Result<f64>, r_max: f64, n_points: usize) -> Result<f64> {
    positive("r_max", r_max)?;
    if n_points < 2 {
        return Err(GchError::Config(format!("n_points must be >= 2 (got {n_points})")));
    }
    let n = n_points + n_points % 2;
    let h = r_max / n as f64;
    let mut vals = Vec::with_capacity(n + 1);
    vals.push(0.0);
    for k in 1..=n {
        vals.push(f(k as f64 * h)?);
    }
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ratio = if peak > 0.0 { vals[n].abs() / peak } else { 0.0 };
    if !(ratio <= TAIL_RATIO) {
        return Err(GchError::TailNotDecayed { r_max, ratio });
    }
    let mut s = 0.0;
    for (k, v) in vals.iter().enumerate() {
        let r = k as f64 * h;
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s += w * v * v * r * r;
    }
    let integral = s * h / 3.0;
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(GchError::Domain(format!("norm integral is {integral}")));
    }
    Ok(1.0 / integral.sqrt())
}

/// Normalization constant `N` of [`wavefunction`] with the `r^2 dr` measure.
pub fn normalize(
    system: &QuantumSystem,
    state: &EigenState,
    r_max: f64,
    n_points: usize,
) -> Result<f64> {
    let nt = NestedTruncation::default();
    normalize_fn(|r| wavefunction(system, state, r, &nt), r_max, n_points)
}

/// Every `(i, beta_i)` in the given ranges, sorted by eigenvalue with ties
/// broken by `(i, beta_i)`.
pub fn spectrum(system: &QuantumSystem, i_max: u32, beta_max: u32) -> Result<Vec<EigenState>> {
    let mut out = Vec::new();
    for i in 0..=i_max {
        for beta in 0..=beta_max {
            out.push(system.eigenstate(i, beta)?);
        }
    }
    out.sort_by(|a, b| {
        a.eigenvalue
            .total_cmp(&b.eigenvalue)
            .then(a.i.cmp(&b.i))
            .then(a.beta_i.cmp(&b.beta_i))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::detect_termination;

    fn osc(l: u32, omega_c: f64) -> QuantumSystem {
        QuantumSystem::RotatingOscillator { l, omega_c }
    }

    #[test]
    fn oscillator_map_examples() {
        let p = map_oscillator(0, 2.0).unwrap();
        assert_eq!((p.mu, p.epsilon, p.nu, p.omega), (-2.0, 1.0, 2.0, 1.0));
        let p = map_oscillator(1, 2.0).unwrap();
        assert_eq!((p.nu, p.omega), (4.0, 2.0));
        let p = map_oscillator(0, 200.0).unwrap();
        assert!((p.epsilon - 0.1).abs() < 1e-16);
        assert!(map_oscillator(0, 0.0).is_err());
    }

    #[test]
    fn oscillator_eigenvalues() {
        assert_eq!(eigen_oscillator(0, 0, 0), 1.0);
        assert_eq!(eigen_oscillator(1, 2, 3), 10.0);
        let ladder: Vec<f64> = (0..4).map(|b| eigen_oscillator(0, 0, b)).collect();
        assert_eq!(ladder, vec![1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn confinement_map_examples() {
        let m = map_confinement(0.0, 1.0, 1.0, 0.5, 0).unwrap();
        assert!((m.alpha_f - 1.0).abs() < 1e-15);
        assert!((m.beta_f - 0.5).abs() < 1e-15);
        assert!((m.params.epsilon + 1.0).abs() < 1e-15);
        assert_eq!((m.params.nu, m.params.omega), (2.0, 1.0));

        let m = map_confinement(1.0, 1.0, 2.0, 0.5, 1).unwrap();
        assert!((m.alpha_f - 2f64.sqrt()).abs() < 1e-15);
        assert!((m.beta_f - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((m.params.omega - (2.0 - 2f64.sqrt())).abs() < 1e-14);

        assert!(matches!(
            map_confinement(1.0, 0.0, 1.0, 0.5, 0),
            Err(GchError::DegenerateCoupling(_))
        ));
    }

    #[test]
    fn confinement_energies() {
        assert!((energy_confinement(1.0, 0.0, 0.5, 0, 0, 0) - 3.0).abs() < 1e-15);
        assert!((energy_confinement(1.0, 1.0, 0.5, 0, 0, 1) - 6.0).abs() < 1e-15);
        let (af, m) = (1.7, 0.8);
        let d = energy_confinement(af, 0.3, m, 1, 2, 4) - energy_confinement(af, 0.3, m, 1, 2, 3);
        assert!((d - 4.0 * af / (2.0 * m)).abs() < 1e-14);
    }

    #[test]
    fn qqbar_energies() {
        assert_eq!(energy_qqbar(1.0, 0, 0, 0), 6.0);
        assert_eq!(energy_qqbar(1.0, 0, 0, 1), 14.0);
        let slope = energy_qqbar(0.7, 3, 1, 2) - energy_qqbar(0.7, 2, 1, 2);
        assert!((slope - 4.0 * 0.7).abs() < 1e-14);
    }

    fn systems() -> Vec<QuantumSystem> {
        vec![
            osc(0, 2.0),
            osc(2, 0.5),
            QuantumSystem::Confinement {
                a: 1.0,
                b: 1.0,
                c: 2.0,
                mass: 0.5,
                l: 1,
            },
            QuantumSystem::QQbar {
                m_q: 0.3,
                b_slope: 1.0,
                l: 0,
            },
        ]
    }

    #[test]
    fn mapped_states_terminate_at_expected_index() {
        for s in systems() {
            for i in 0..4 {
                for beta in 0..5 {
                    let st = s.eigenstate(i, beta).unwrap();
                    assert_eq!(
                        detect_termination(&st.gch, st.lambda),
                        Some((2 * beta + i + 1) as usize)
                    );
                }
            }
        }
    }

    #[test]
    fn omega_route_reproduces_eigenvalues() {
        for s in systems() {
            for i in 0..4 {
                for beta in 0..6 {
                    let st = s.eigenstate(i, beta).unwrap();
                    let back = s.eigenvalue_from_omega(st.gch.omega_cap).unwrap();
                    let scale = st.eigenvalue.abs().max(1e-300);
                    assert!((back - st.eigenvalue).abs() <= 1e-12 * scale, "{s:?} {i} {beta}");
                }
            }
        }
    }

    #[test]
    fn ground_oscillator_order_zero_is_c0() {
        let s = osc(0, 2.0);
        let st = s.eigenstate(0, 0).unwrap();
        let nt = NestedTruncation::default();
        let r = radial_factor(&st, 0.7, &nt).unwrap();
        assert!((r.order_values[0] - 1.0).abs() < 1e-15);
        assert!((radial_c0(&st).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn massless_qqbar_ground_state_is_gaussian() {
        for l in 0..3 {
            let b = 1.3;
            let s = QuantumSystem::QQbar {
                m_q: 0.0,
                b_slope: b,
                l,
            };
            let st = s.eigenstate(0, 0).unwrap();
            let nt = NestedTruncation::default();
            for r in [0.2, 1.0, 3.0] {
                let psi = wavefunction(&s, &st, r, &nt).unwrap();
                let expect = r.powi(l as i32) * (-0.25 * b * r * r).exp();
                assert!((psi - expect).abs() <= 1e-15 * expect.abs().max(1e-300));
            }
            // int r^{2l} e^{-b r^2/2} r^2 dr = Gamma(l + 3/2) / (2 (b/2)^{l+3/2})
            let lh = l as f64 + 1.5;
            let exact = libm::tgamma(lh) / (2.0 * (0.5 * b).powf(lh));
            let n = normalize(&s, &st, 20.0, 4000).unwrap();
            assert!((n - 1.0 / exact.sqrt()).abs() <= 1e-10 * n, "l={l}");
        }
    }

    #[test]
    fn normalization_scales_inversely() {
        let s = QuantumSystem::QQbar {
            m_q: 0.0,
            b_slope: 1.0,
            l: 1,
        };
        let st = s.eigenstate(0, 2).unwrap();
        let nt = NestedTruncation::default();
        let n1 = normalize_fn(|r| wavefunction(&s, &st, r, &nt), 20.0, 2000).unwrap();
        let n2 = normalize_fn(|r| Ok(2.0 * wavefunction(&s, &st, r, &nt)?), 20.0, 2000).unwrap();
        assert!((n2 - 0.5 * n1).abs() <= 1e-14 * n1);
        let n3 = normalize_fn(|r| wavefunction(&s, &st, r, &nt), 20.0, 4000).unwrap();
        assert!((n3 - n1).abs() <= 1e-8 * n1);
    }

    #[test]
    fn undecayed_tail_is_reported() {
        let s = QuantumSystem::QQbar {
            m_q: 0.0,
            b_slope: 1.0,
            l: 0,
        };
        let st = s.eigenstate(0, 0).unwrap();
        assert!(matches!(
            normalize(&s, &st, 3.0, 100),
            Err(GchError::TailNotDecayed { .. })
        ));
    }

    #[test]
    fn spectrum_is_sorted_with_ties() {
        let s = QuantumSystem::QQbar {
            m_q: 0.0,
            b_slope: 1.0,
            l: 0,
        };
        let sp = spectrum(&s, 1, 2).unwrap();
        let e: Vec<f64> = sp.iter().map(|x| x.eigenvalue).collect();
        assert_eq!(e, vec![6.0, 10.0, 14.0, 18.0, 22.0, 26.0]);

        let sp = spectrum(&osc(0, 1.0), 2, 2).unwrap();
        // lambda_m = 3 for (0,1) and (2,0)
        let threes: Vec<(u32, u32)> = sp
            .iter()
            .filter(|s| s.eigenvalue == 3.0)
            .map(|s| (s.i, s.beta_i))
            .collect();
        assert_eq!(threes, vec![(0, 1), (2, 0)]);
    }

    /// Radial equation residual by central differences, relative to the
    /// largest term.
    fn radial_residual(s: &QuantumSystem, st: &EigenState, r: f64) -> f64 {
        let nt = NestedTruncation::default();
        let h = 1e-4;
        let f = |r: f64| wavefunction(s, st, r, &nt).unwrap();
        let (fm, f0, fp) = (f(r - h), f(r), f(r + h));
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        let d1 = (fp - fm) / (2.0 * h);
        let l = s.l() as f64;
        let cent = l * (l + 1.0) / (r * r);
        let terms: Vec<f64> = match *s {
            QuantumSystem::RotatingOscillator { omega_c, .. } => {
                let lam = st.eigenvalue;
                vec![
                    d2,
                    (2.0 * lam + 1.0) / (2.0 * omega_c) * f0,
                    -(r - 1.0) * (r - 1.0) / (4.0 * omega_c * omega_c) * f0,
                    -cent * f0,
                ]
            }
            QuantumSystem::Confinement { a, b, c, mass, .. } => vec![
                d2,
                2.0 * mass * st.eigenvalue * f0,
                2.0 * mass * (a / r - b * r - c * r * r) * f0,
                -cent * f0,
            ],
            QuantumSystem::QQbar { m_q, b_slope, .. } => vec![
                -d2,
                -2.0 / r * d1,
                (m_q + 0.5 * b_slope * r).powi(2) * f0,
                cent * f0,
                -0.25 * st.eigenvalue * f0,
            ],
        };
        let sum: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        sum.abs() / scale
    }

    #[test]
    fn wavefunctions_solve_their_radial_equations() {
        for s in systems() {
            for (i, beta) in [(0, 0), (0, 2), (1, 1), (2, 0)] {
                let st = s.eigenstate(i, beta).unwrap();
                for r in [0.4, 1.0, 1.7] {
                    let res = radial_residual(&s, &st, r);
                    assert!(res < 1e-6, "{s:?} i={i} beta={beta} r={r}: {res:e}");
                }
            }
        }
    }

    #[test]
    fn foreign_state_is_rejected() {
        let a = osc(0, 2.0);
        let st = osc(1, 2.0).eigenstate(0, 0).unwrap();
        assert!(wavefunction(&a, &st, 1.0, &NestedTruncation::default()).is_err());
    }
}
