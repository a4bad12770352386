//! Parameter set of the grand confluent hypergeometric equation
//!
//! ```text
//! x y'' + (mu x^2 + epsilon x + nu) y' + (Omega x + epsilon omega) y = 0
//! ```
//!
//! together with the derived variables, the indicial roots at `x = 0` and the
//! coefficients of the three-term recurrence `c_{n+1} = A_n c_n + B_n c_{n-1}`
//! obeyed by the Frobenius coefficients of `y = sum c_n x^{n+lambda}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GchError, Result};

/// The five real coefficients of the GCH equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GchParams {
    /// Coefficient of `x^2` in the first-derivative term.
    pub mu: f64,
    /// Coefficient of `x` in the first-derivative term.
    pub epsilon: f64,
    /// Constant in the first-derivative term.
    pub nu: f64,
    /// Coefficient of `x` in the potential term (written `Omega`).
    pub omega_cap: f64,
    /// Multiplies `epsilon` in the constant potential term (written `omega`).
    pub omega: f64,
}

/// Quantities derived from [`GchParams`] that the closed forms are written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedVars {
    pub gamma: f64,
    mu: f64,
    epsilon: f64,
}

impl DerivedVars {
    /// `z = -mu x^2 / 2`
    pub fn z_of(&self, x: f64) -> f64 {
        -0.5 * self.mu * x * x
    }

    /// `eps_tilde = -epsilon x / 2`
    pub fn eps_tilde_of(&self, x: f64) -> f64 {
        -0.5 * self.epsilon * x
    }
}

impl GchParams {
    pub fn new(mu: f64, epsilon: f64, nu: f64, omega_cap: f64, omega: f64) -> Result<Self> {
        let p = Self {
            mu,
            epsilon,
            nu,
            omega_cap,
            omega,
        };
        p.check_finite()?;
        Ok(p)
    }

    pub fn check_finite(&self) -> Result<()> {
        for (field, value) in [
            ("mu", self.mu),
            ("epsilon", self.epsilon),
            ("nu", self.nu),
            ("omega_cap", self.omega_cap),
            ("omega", self.omega),
        ] {
            if !value.is_finite() {
                return Err(GchError::NonFinite { field, value });
            }
        }
        Ok(())
    }

    /// `gamma = (1 + nu) / 2`
    pub fn gamma(&self) -> f64 {
        0.5 * (1.0 + self.nu)
    }

    pub fn derived(&self) -> DerivedVars {
        DerivedVars {
            gamma: self.gamma(),
            mu: self.mu,
            epsilon: self.epsilon,
        }
    }

    pub fn with_omega_cap(mut self, omega_cap: f64) -> Self {
        self.omega_cap = omega_cap;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// `Omega / (2 mu)`, the Pochhammer parameter of the B chains.
    pub(crate) fn omega_over_two_mu(&self) -> Result<f64> {
        if self.mu == 0.0 {
            return Err(GchError::Domain(
                "mu = 0: Omega/(2 mu) is undefined".to_string(),
            ));
        }
        Ok(self.omega_cap / (2.0 * self.mu))
    }
}

/// Which Frobenius solution at `x = 0` is wanted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    /// Indicial root `lambda = 0`.
    #[serde(alias = "first")]
    FirstKind,
    /// Indicial root `lambda = 1 - nu`.
    #[serde(alias = "second")]
    SecondKind,
}

impl SolutionKind {
    pub fn lambda_of(self, nu: f64) -> f64 {
        match self {
            SolutionKind::FirstKind => 0.0,
            SolutionKind::SecondKind => 1.0 - nu,
        }
    }
}

impl fmt::Display for SolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionKind::FirstKind => f.write_str("first-kind"),
            SolutionKind::SecondKind => f.write_str("second-kind"),
        }
    }
}

/// Parameters that passed [`validate`] for a given solution kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedParams {
    pub params: GchParams,
    pub kind: SolutionKind,
    pub lambda: f64,
}

pub(crate) fn nearest_integer(x: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) && r.abs() < 9.0e15 {
        Some(r as i64)
    } else {
        None
    }
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Checks finiteness and the nu restriction of the requested kind.
///
/// First kind needs `nu` outside `{0, -1, -2, ...}`, second kind needs `nu`
/// outside `{2, 3, 4, ...}`. At `nu = 1` both roots coincide and only the first
/// kind exists (the logarithmic partner is not constructed).
pub fn validate(p: &GchParams, kind: SolutionKind) -> Result<ValidatedParams> {
    p.check_finite()?;
    let nu = p.nu;
    match kind {
        SolutionKind::FirstKind => {
            if is_nonpositive_integer(nu) {
                return Err(GchError::KindRestriction {
                    kind,
                    nu,
                    rule: "nu not in {0, -1, -2, ...}",
                });
            }
        }
        SolutionKind::SecondKind => {
            if nu >= 2.0 && nu == nu.round() {
                return Err(GchError::KindRestriction {
                    kind,
                    nu,
                    rule: "nu not in {2, 3, 4, ...}",
                });
            }
            if nu == 1.0 {
                return Err(GchError::KindRestriction {
                    kind,
                    nu,
                    rule: "nu != 1 (coincident indicial roots)",
                });
            }
        }
    }
    Ok(ValidatedParams {
        params: *p,
        kind,
        lambda: kind.lambda_of(nu),
    })
}

/// The two indicial roots `(0, 1 - nu)`, first kind first.
pub fn indicial_roots(nu: f64) -> (f64, f64) {
    (0.0, 1.0 - nu)
}

fn denominator(n: usize, lambda: f64, p: &GchParams) -> Result<f64> {
    let n_f = n as f64;
    let d = (n_f + 1.0 + lambda) * (n_f + p.nu + lambda);
    if d == 0.0 {
        return Err(GchError::Pole {
            n,
            lambda,
            nu: p.nu,
        });
    }
    Ok(d)
}

/// `A_n = -epsilon (n + omega + lambda) / ((n + 1 + lambda)(n + nu + lambda))`
pub fn coefficient_a(n: usize, lambda: f64, p: &GchParams) -> Result<f64> {
    let d = denominator(n, lambda, p)?;
    Ok(-p.epsilon * (n as f64 + p.omega + lambda) / d)
}

/// `B_n = -(Omega + mu (n - 1 + lambda)) / ((n + 1 + lambda)(n + nu + lambda))`
///
/// `n - 1` is formed in floating point before adding `lambda`, so an `Omega`
/// built as `-mu (m + lambda)` cancels exactly at `n = m + 1`.
pub fn coefficient_b(n: usize, lambda: f64, p: &GchParams) -> Result<f64> {
    let d = denominator(n, lambda, p)?;
    let shift = (n as f64 - 1.0) + lambda;
    Ok(-(p.omega_cap + p.mu * shift) / d)
}
