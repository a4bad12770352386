//! Direct summation of the Frobenius series by running the three-term
//! recurrence. This path never touches the nested closed forms and is used as
//! the ground truth they are checked against.

use serde::{Deserialize, Serialize};

use crate::error::{GchError, Result};
use crate::params::{coefficient_a, coefficient_b, nearest_integer, GchParams};
use crate::sum::NeumaierSum;

/// Caps and tolerances for the direct recurrence sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub max_terms: usize,
    /// Stop once `|term| < rel_tol * |partial sum|` holds for three terms in a row.
    pub rel_tol: f64,
    /// Terms below this magnitude count as zero.
    pub abs_floor: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            max_terms: 400,
            rel_tol: 1e-12,
            abs_floor: 1e-300,
        }
    }
}

impl Truncation {
    pub fn new(max_terms: usize, rel_tol: f64, abs_floor: f64) -> Result<Self> {
        let t = Self {
            max_terms,
            rel_tol,
            abs_floor,
        };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<()> {
        if self.max_terms < 8 {
            return Err(GchError::Config(format!(
                "max_terms must be >= 8 (got {})",
                self.max_terms
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(GchError::Config(format!(
                "rel_tol must lie in (0, 1) (got {})",
                self.rel_tol
            )));
        }
        if !(self.abs_floor > 0.0) {
            return Err(GchError::Config(format!(
                "abs_floor must be positive (got {})",
                self.abs_floor
            )));
        }
        Ok(())
    }
}

/// Outcome of a series evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the last term added; used as the a-posteriori error figure.
    pub last_term_mag: f64,
    pub converged: bool,
    /// Recurrence index `n*` with `B_{n*} = 0`, when there is one.
    pub terminated_at: Option<usize>,
    /// Per transcendent order contributions `y_0, y_1, ...` (nested forms only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order_values: Vec<f64>,
}

impl EvalResult {
    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.last_term_mag *= factor.abs();
        for v in &mut self.order_values {
            *v *= factor;
        }
        self
    }
}

/// Real value of `x^lambda`, or a domain error when it is not real.
pub(crate) fn real_power(x: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(1.0);
    }
    if x > 0.0 {
        return Ok(x.powf(lambda));
    }
    if x == 0.0 {
        return if lambda > 0.0 {
            Ok(0.0)
        } else {
            Err(GchError::Domain(format!(
                "x^lambda is singular at x = 0 for lambda = {lambda}"
            )))
        };
    }
    if lambda == lambda.round() {
        return Ok(x.powi(lambda as i32));
    }
    Err(GchError::Domain(format!(
        "x^lambda is not real for x = {x} < 0 and non-integer lambda = {lambda}"
    )))
}

/// Index `n* = 1 - lambda - Omega/mu` at which `B_{n*}` vanishes, if it is a
/// positive integer.
pub fn detect_termination(p: &GchParams, lambda: f64) -> Option<usize> {
    if p.mu == 0.0 {
        return None;
    }
    let n_star = 1.0 - lambda - p.omega_cap / p.mu;
    match nearest_integer(n_star) {
        Some(n) if n >= 1 => Some(n as usize),
        _ => None,
    }
}

/// Frobenius coefficients `c_0 .. c_{count-1}` from `c_1 = A_0 c_0` and
/// `c_{n+1} = A_n c_n + B_n c_{n-1}`.
pub fn coefficients(p: &GchParams, lambda: f64, c0: f64, count: usize) -> Result<Vec<f64>> {
    let mut c = Vec::with_capacity(count);
    if count == 0 {
        return Ok(c);
    }
    c.push(c0);
    if count == 1 {
        return Ok(c);
    }
    c.push(coefficient_a(0, lambda, p)? * c0);
    for n in 1..count - 1 {
        let next = coefficient_a(n, lambda, p)? * c[n] + coefficient_b(n, lambda, p)? * c[n - 1];
        c.push(next);
    }
    Ok(c)
}

/// Sums `sum_n c_n x^{n+lambda}` directly from the recurrence.
///
/// Hitting `max_terms` before the tolerance is met is reported through
/// `converged = false`, not as an error.
pub fn sum_series(p: &GchParams, lambda: f64, c0: f64, x: f64, t: &Truncation) -> Result<EvalResult> {
    p.check_finite()?;
    t.check()?;
    if !x.is_finite() {
        return Err(GchError::Domain(format!("x = {x} is not finite")));
    }
    let prefactor = real_power(x, lambda)?;
    let terminated_at = detect_termination(p, lambda);

    let mut acc = NeumaierSum::new();
    acc.add(c0);
    if x == 0.0 || c0 == 0.0 {
        return Ok(EvalResult {
            value: c0 * prefactor,
            terms_used: 1,
            last_term_mag: 0.0,
            converged: true,
            terminated_at,
            order_values: Vec::new(),
        });
    }

    // c_{n-1} x^{n-1} and c_n x^n, carried as already-scaled terms
    let mut prev = 0.0;
    let mut cur = c0;
    let mut small_run = 0usize;
    let mut last = c0.abs();
    let mut terms = 1usize;
    let mut converged = false;
    for n in 0..t.max_terms - 1 {
        let a = coefficient_a(n, lambda, p)?;
        let next = if n == 0 {
            a * cur * x
        } else {
            (a * cur + coefficient_b(n, lambda, p)? * prev * x) * x
        };
        acc.add(next);
        terms += 1;
        last = next.abs();
        prev = cur;
        cur = next;

        let partial = acc.total().abs();
        if last < t.rel_tol * partial || last < t.abs_floor {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            converged = true;
            break;
        }
        // two zero terms in a row make every later term zero
        if prev.abs() < t.abs_floor && cur.abs() < t.abs_floor {
            converged = true;
            break;
        }
    }

    Ok(EvalResult {
        value: acc.total() * prefactor,
        terms_used: terms,
        last_term_mag: last * prefactor.abs(),
        converged,
        terminated_at,
        order_values: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(mu: f64, epsilon: f64, nu: f64, omega_cap: f64, omega: f64) -> GchParams {
        GchParams::new(mu, epsilon, nu, omega_cap, omega).unwrap()
    }

    #[test]
    fn origin_returns_c0() {
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        let r = sum_series(&q, 0.0, 5.0, 0.0, &Truncation::default()).unwrap();
        assert_eq!(r.value, 5.0);
        assert!(r.converged);
    }

    #[test]
    fn even_series_without_epsilon() {
        let q = p(1.3, 0.0, 0.8, -0.7, 2.0);
        let t = Truncation::default();
        for x in [0.3, 1.1, 1.9] {
            let a = sum_series(&q, 0.0, 1.0, x, &t).unwrap().value;
            let b = sum_series(&q, 0.0, 1.0, -x, &t).unwrap().value;
            assert_eq!(a, b);
        }
    }

    // Frozen from this routine at max_terms = 500, rel_tol = 1e-14 and
    // checked against the ODE residual in verify.rs.
    const GOLDEN_X04: f64 = 8.6031086346992480e-1;

    #[test]
    fn golden_value() {
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        let t = Truncation::new(500, 1e-14, 1e-300).unwrap();
        let r = sum_series(&q, 0.0, 1.0, 0.4, &t).unwrap();
        assert!(r.converged);
        assert!((r.value - GOLDEN_X04).abs() <= 1e-15, "{:.17e}", r.value);
    }

    #[test]
    fn fractional_power_of_negative_x_is_domain_error() {
        let q = p(-1.0, 0.4, 0.5, 0.7, 1.2);
        assert!(matches!(
            sum_series(&q, 0.5, 1.0, -0.3, &Truncation::default()),
            Err(GchError::Domain(_))
        ));
        // integer lambda is fine for negative x
        assert!(sum_series(&q, 2.0, 1.0, -0.3, &Truncation::default()).is_ok());
    }

    #[test]
    fn non_convergence_is_flagged() {
        let q = p(-2.0, 1.0, 1.5, 3.0, 0.25);
        let t = Truncation::new(8, 1e-14, 1e-300).unwrap();
        let r = sum_series(&q, 0.0, 1.0, 2.0, &t).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_used, 8);
    }

    #[test]
    fn converged_result_respects_tolerance() {
        let q = p(-2.0, 1.5, 0.5, 1.0, 0.25);
        let t = Truncation::default();
        let r = sum_series(&q, 0.0, 1.0, 1.5, &t).unwrap();
        assert!(r.converged);
        assert!(r.last_term_mag <= t.rel_tol * r.value.abs());
    }

    #[test]
    fn truncation_invariants() {
        assert!(Truncation::new(7, 1e-12, 1e-300).is_err());
        assert!(Truncation::new(8, 1.0, 1e-300).is_err());
        assert!(Truncation::new(8, 1e-3, 0.0).is_err());
    }

    #[test]
    fn detect_termination_examples() {
        assert_eq!(detect_termination(&p(1.0, 0.0, 1.0, -3.0, 0.0), 0.0), Some(4));
        assert_eq!(detect_termination(&p(1.0, 0.0, 1.0, 2.5, 0.0), 0.0), None);
        let beta0 = 3.0;
        let mu = -2.0;
        let omega_cap = -mu * (2.0 * beta0 + 0.0);
        assert_eq!(omega_cap, 12.0);
        assert_eq!(detect_termination(&p(mu, 0.0, 1.0, omega_cap, 0.0), 0.0), Some(7));
        assert_eq!(detect_termination(&p(0.0, 0.0, 1.0, omega_cap, 0.0), 0.0), None);
    }

    #[test]
    fn termination_reported_in_result() {
        let q = p(1.0, 0.5, 1.5, -3.0, 1.0);
        let r = sum_series(&q, 0.0, 1.0, 0.5, &Truncation::default()).unwrap();
        assert_eq!(r.terminated_at, Some(4));
        assert_eq!(coefficient_b(4, 0.0, &q).unwrap(), 0.0);
    }

    #[test]
    fn coefficients_follow_recurrence() {
        let q = p(0.7, -1.2, 2.5, 0.4, 1.1);
        let c = coefficients(&q, 0.0, 2.0, 6).unwrap();
        assert_eq!(c[0], 2.0);
        assert_eq!(c[1], coefficient_a(0, 0.0, &q).unwrap() * 2.0);
        for n in 1..5 {
            let expect = coefficient_a(n, 0.0, &q).unwrap() * c[n]
                + coefficient_b(n, 0.0, &q).unwrap() * c[n - 1];
            assert_eq!(c[n + 1], expect);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn linear_in_c0(
                mu in -2.0f64..2.0,
                eps in -2.0f64..2.0,
                nu in 0.2f64..3.0,
                omega_cap in -2.0f64..2.0,
                omega in -2.0f64..2.0,
                x in -1.0f64..1.0,
                a in -5.0f64..5.0,
                b in -5.0f64..5.0,
            ) {
                let q = GchParams { mu, epsilon: eps, nu, omega_cap, omega };
                let t = Truncation::default();
                let ya = sum_series(&q, 0.0, a, x, &t).unwrap().value;
                let yb = sum_series(&q, 0.0, b, x, &t).unwrap().value;
                let yab = sum_series(&q, 0.0, a + b, x, &t).unwrap().value;
                let scale = ya.abs().max(yb.abs()).max(yab.abs()).max(1e-300);
                prop_assert!((ya + yb - yab).abs() <= 1e-13 * scale);
            }
        }
    }
}
