//! Independent correctness instruments: ODE residuals, a Kummer oracle, grid
//! cross-validation of the nested sums against the recurrence, and the
//! Wronskian of the two Frobenius solutions.

use serde::{Deserialize, Serialize};

use crate::error::{GchError, Result};
use crate::params::{validate, GchParams, SolutionKind};
use crate::recurrence::{sum_series, Truncation};
use crate::series::{eval_general, eval_qw_infinite, eval_rw_infinite, NestedTruncation};

/// ODE operator applied to a truncated series at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub x: f64,
    pub residual: f64,
    /// `max(|x y''|, |(mu x^2 + eps x + nu) y'|, |(Omega x + eps omega) y|)`,
    /// or the sum of absolute term contributions when that is larger.
    pub scale: f64,
}

impl ResidualReport {
    /// `|residual| / scale`, or `|residual|` when every term vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual.abs() / self.scale
        } else {
            self.residual.abs()
        }
    }
}

/// `x^e` for the common factor `x^{lambda-1}`; fractional powers of negative
/// `x` use `|x|^e`, which rescales every term alike.
fn common_power(x: f64, e: f64) -> f64 {
    if e == e.round() && e.abs() < i32::MAX as f64 {
        x.powi(e as i32)
    } else {
        x.abs().powf(e)
    }
}

/// Applies `x y'' + (mu x^2 + eps x + nu) y' + (Omega x + eps omega) y` to
/// `y = sum c_n x^{n+lambda}`, with derivatives taken term by term.
///
/// The residual is assembled per power of `x`:
/// `r_m = c_m (m+lambda)(m+lambda-1+nu) + eps c_{m-1} (m-1+lambda+omega)
///        + c_{m-2} (Omega + mu (m-2+lambda))`,
/// which is zero for a recurrence-exact list except at the two top powers.
pub fn ode_residual(coeffs: &[f64], lambda: f64, p: &GchParams, x: f64) -> ResidualReport {
    let n = coeffs.len();
    let c = |m: isize| -> f64 {
        if m < 0 || m as usize >= n {
            0.0
        } else {
            coeffs[m as usize]
        }
    };

    if x == 0.0 {
        // only powers with exponent m + lambda - 1 == 0 survive
        let mut residual = 0.0;
        let mut scale: f64 = 0.0;
        for m in 0..n + 2 {
            let e = m as f64 + lambda - 1.0;
            let mi = m as isize;
            let r = c(mi) * (m as f64 + lambda) * (e + p.nu)
                + p.epsilon * c(mi - 1) * (m as f64 - 1.0 + lambda + p.omega)
                + c(mi - 2) * (p.omega_cap + p.mu * (m as f64 - 2.0 + lambda));
            if e == 0.0 {
                residual += r;
                scale = scale
                    .max((c(mi) * (m as f64 + lambda) * e).abs())
                    .max((p.nu * c(mi) * (m as f64 + lambda)).abs())
                    .max((p.epsilon * p.omega * c(mi - 1)).abs());
            } else if e < 0.0 && r != 0.0 {
                residual = f64::INFINITY;
            }
        }
        return ResidualReport { x, residual, scale };
    }

    // everything below is in units of x^{lambda-1}
    let mut s_y = 0.0; // sum c_n x^{n+1}
    let mut s_dy = 0.0; // sum c_n (n+lambda) x^n
    let mut s_xddy = 0.0; // sum c_n (n+lambda)(n+lambda-1) x^n
    let mut s_res = 0.0;
    let mut s_abs = 0.0; // rounding scale of s_res
    let mut xm = 1.0;
    for m in 0..n + 2 {
        let mf = m as f64;
        let mi = m as isize;
        if m < n {
            let cm = coeffs[m];
            s_y += cm * xm * x;
            s_dy += cm * (mf + lambda) * xm;
            s_xddy += cm * (mf + lambda) * (mf + lambda - 1.0) * xm;
        }
        let r = c(mi) * (mf + lambda) * (mf + lambda - 1.0 + p.nu)
            + p.epsilon * c(mi - 1) * (mf - 1.0 + lambda + p.omega)
            + c(mi - 2) * (p.omega_cap + p.mu * (mf - 2.0 + lambda));
        s_res += r * xm;
        s_abs += ((c(mi) * (mf + lambda) * (mf + lambda - 1.0 + p.nu)).abs()
            + (p.epsilon * c(mi - 1) * (mf - 1.0 + lambda + p.omega)).abs()
            + (c(mi - 2) * (p.omega_cap + p.mu * (mf - 2.0 + lambda))).abs())
            * xm.abs();
        xm *= x;
    }
    let base = common_power(x, lambda - 1.0);
    let t1 = base * s_xddy;
    let t2 = (p.mu * x * x + p.epsilon * x + p.nu) * base * s_dy;
    let t3 = (p.omega_cap * x + p.epsilon * p.omega) * base * s_y;
    ResidualReport {
        x,
        residual: base * s_res,
        // the three terms can all vanish where both coefficient polynomials do
        scale: t1.abs().max(t2.abs()).max(t3.abs()).max(base.abs() * s_abs),
    }
}

/// Kummer's `M(a; gamma; z) = sum (a)_m / ((1)_m (gamma)_m) z^m` by direct
/// compensated summation.
pub fn kummer_oracle(a: f64, gamma: f64, z: f64) -> Result<f64> {
    if gamma <= 0.0 && gamma == gamma.round() {
        return Err(GchError::GammaPole(gamma));
    }
    if !(a.is_finite() && gamma.is_finite() && z.is_finite()) {
        return Err(GchError::Domain(format!(
            "non-finite Kummer argument (a = {a}, gamma = {gamma}, z = {z})"
        )));
    }
    // Kahan-Babuska accumulation, kept local to this oracle
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut quiet = 0;
    for m in 0..10_000 {
        let mf = m as f64;
        term *= (a + mf) * z / ((mf + 1.0) * (gamma + mf));
        if term == 0.0 {
            break;
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        // past the peak the terms shrink monotonically
        if mf + 1.0 > (a.abs() + z.abs()) && term.abs() <= 1e-14 * (sum + comp).abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(sum + comp)
}

/// Cartesian parameter grid for [`cross_validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub mu: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub nu: Vec<f64>,
    pub omega_cap: Vec<f64>,
    pub omega: Vec<f64>,
    pub x: Vec<f64>,
    pub kinds: Vec<SolutionKind>,
}

impl Default for ParamGrid {
    /// 384 parameter points, each tried for both kinds.
    fn default() -> Self {
        Self {
            mu: vec![-2.0, -0.5, 0.5, 2.0],
            epsilon: vec![-2.0, -0.5, 0.5, 2.0],
            nu: vec![0.5, 1.5],
            omega_cap: vec![-1.0, 1.0],
            omega: vec![0.25, 1.0],
            x: vec![0.1, 0.5, 1.0],
            kinds: vec![SolutionKind::FirstKind, SolutionKind::SecondKind],
        }
    }
}

impl ParamGrid {
    pub fn single(p: GchParams, kind: SolutionKind, x: f64) -> Self {
        Self {
            mu: vec![p.mu],
            epsilon: vec![p.epsilon],
            nu: vec![p.nu],
            omega_cap: vec![p.omega_cap],
            omega: vec![p.omega],
            x: vec![x],
            kinds: vec![kind],
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
            * self.epsilon.len()
            * self.nu.len()
            * self.omega_cap.len()
            * self.omega.len()
            * self.x.len()
            * self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in a fixed order: kind is the slowest index, `x` the fastest.
    pub fn points(&self) -> Vec<(GchParams, SolutionKind, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &kind in &self.kinds {
            for &mu in &self.mu {
                for &epsilon in &self.epsilon {
                    for &nu in &self.nu {
                        for &omega_cap in &self.omega_cap {
                            for &omega in &self.omega {
                                for &x in &self.x {
                                    let p = GchParams {
                                        mu,
                                        epsilon,
                                        nu,
                                        omega_cap,
                                        omega,
                                    };
                                    out.push((p, kind, x));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Both evaluations at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointValues {
    pub nested: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub nested_converged: bool,
    pub oracle_converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub params: GchParams,
    pub kind: SolutionKind,
    pub x: f64,
    pub outcome: std::result::Result<PointValues, GchError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossReport {
    /// Largest relative error over the points that evaluated.
    pub max_rel_err: f64,
    /// Index into `records` of the worst point.
    pub worst: Option<usize>,
    pub records: Vec<PointRecord>,
}

impl CrossReport {
    pub fn evaluated(&self) -> usize {
        self.records.iter().filter(|r| r.outcome.is_ok()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &PointRecord> {
        self.records.iter().filter(|r| r.outcome.is_err())
    }

    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| match &r.outcome {
            Ok(v) => v.nested_converged && v.oracle_converged,
            Err(_) => true,
        })
    }
}

fn compare_point(
    p: &GchParams,
    kind: SolutionKind,
    x: f64,
    t: &Truncation,
    nt: &NestedTruncation,
) -> Result<PointValues> {
    p.check_finite()?;
    let v = validate(p, kind)?;
    let nested = eval_general(p, v.lambda, 1.0, x, nt)?;
    let oracle = sum_series(p, v.lambda, 1.0, x, t)?;
    let diff = (nested.value - oracle.value).abs();
    let rel_err = if diff == 0.0 {
        0.0
    } else {
        diff / oracle.value.abs().max(f64::MIN_POSITIVE)
    };
    Ok(PointValues {
        nested: nested.value,
        oracle: oracle.value,
        rel_err,
        nested_converged: nested.converged,
        oracle_converged: oracle.converged,
    })
}

/// Compares the nested sums with the recurrence at every grid point, with
/// `c0 = 1` at the indicial root of each kind.
///
/// Invalid points are recorded with their error and the sweep continues.
pub fn cross_validate(grid: &ParamGrid, t: &Truncation, nt: &NestedTruncation) -> CrossReport {
    let mut records = Vec::with_capacity(grid.len());
    let mut max_rel_err = 0.0f64;
    let mut worst = None;
    for (params, kind, x) in grid.points() {
        let outcome = compare_point(&params, kind, x, t, nt);
        if let Ok(v) = &outcome {
            if worst.is_none() || v.rel_err > max_rel_err || v.rel_err.is_nan() {
                max_rel_err = if v.rel_err.is_nan() { f64::INFINITY } else { v.rel_err };
                worst = Some(records.len());
            }
        }
        records.push(PointRecord {
            params,
            kind,
            x,
            outcome,
        });
    }
    CrossReport {
        max_rel_err,
        worst,
        records,
    }
}

/// `W[QW, RW](x) / max(|QW RW'|, |QW' RW|)` with central differences of step `h`.
///
/// A value near zero means the two solutions are numerically dependent.
pub fn wronskian_scaled(p: &GchParams, x: f64, h: f64, nt: &NestedTruncation) -> Result<f64> {
    let qw = |s: f64| eval_qw_infinite(p, s, nt).map(|r| r.value);
    let rw = |s: f64| eval_rw_infinite(p, s, nt).map(|r| r.value);
    let (q, r) = (qw(x)?, rw(x)?);
    let dq = (qw(x + h)? - qw(x - h)?) / (2.0 * h);
    let dr = (rw(x + h)? - rw(x - h)?) / (2.0 * h);
    let w = q * dr - dq * r;
    let scale = (q * dr).abs().max((dq * r).abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(w / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::coefficients;

    fn p(mu: f64, epsilon: f64, nu: f64, omega_cap: f64, omega: f64) -> GchParams {
        GchParams::new(mu, epsilon, nu, omega_cap, omega).unwrap()
    }

    #[test]
    fn empty_list_has_zero_residual() {
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        for x in [0.0, 0.3, -1.0] {
            assert_eq!(ode_residual(&[], 0.0, &q, x).residual, 0.0);
        }
    }

    #[test]
    fn recurrence_series_satisfies_ode() {
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        for lambda in [0.0, 1.0 - q.nu] {
            let c = coefficients(&q, lambda, 1.0, 120).unwrap();
            for x in [0.1, 0.4, 0.9, -0.7] {
                if x < 0.0 && lambda != 0.0 {
                    continue;
                }
                let r = ode_residual(&c, lambda, &q, x);
                assert!(r.relative() <= 1e-12, "lambda={lambda} x={x}: {r:?}");
            }
        }
    }

    #[test]
    fn golden_recurrence_value_has_small_residual() {
        // the same point as the frozen recurrence value
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        let c = coefficients(&q, 0.0, 1.0, 500).unwrap();
        let r = ode_residual(&c, 0.0, &q, 0.4);
        assert!(r.relative() <= 1e-14);
        let y: f64 = c.iter().enumerate().map(|(n, c)| c * 0.4f64.powi(n as i32)).sum();
        assert!((y - 8.6031086346992480e-1).abs() <= 1e-14);
    }

    #[test]
    fn corrupted_coefficient_is_detected() {
        let q = p(-2.0, 1.0, 2.0, 4.0, 1.0);
        let mut c = coefficients(&q, 0.0, 1.0, 80).unwrap();
        c[2] *= 1.0 + 1e-3;
        for x in [0.3, 0.7, 1.2] {
            assert!(ode_residual(&c, 0.0, &q, x).relative() > 1e-5);
        }
    }

    #[test]
    fn origin_residual_is_indicial() {
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        let c = coefficients(&q, 0.0, 1.0, 10).unwrap();
        let r = ode_residual(&c, 0.0, &q, 0.0);
        assert!(r.residual.abs() < 1e-15);
    }

    #[test]
    fn residual_is_linear() {
        let q = p(-0.5, 2.0, 0.5, -1.0, 1.0);
        let a = coefficients(&q, 0.0, 1.0, 40).unwrap();
        let b: Vec<f64> = (0..40).map(|k| ((k * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let s: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let x = 0.8;
        let ra = ode_residual(&a, 0.0, &q, x).residual;
        let rb = ode_residual(&b, 0.0, &q, x).residual;
        let rs = ode_residual(&s, 0.0, &q, x).residual;
        assert!((rs - ra - rb).abs() <= 1e-12 * rb.abs().max(1.0));
    }

    #[test]
    fn kummer_examples() {
        assert!((kummer_oracle(1.3, 1.3, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(kummer_oracle(0.0, 2.5, 7.0).unwrap(), 1.0);
        assert!(matches!(kummer_oracle(1.0, -2.0, 1.0), Err(GchError::GammaPole(_))));
        // M(1; 2; z) = (e^z - 1)/z
        let z: f64 = -3.5;
        let v = kummer_oracle(1.0, 2.0, z).unwrap();
        assert!((v - (z.exp() - 1.0) / z).abs() < 1e-15);
    }

    // Frozen from a 200-term run; agrees with a 30-digit reference.
    const KUMMER_HALF_ONE_MINUS_ONE: f64 = 6.4503527044915007e-1;

    #[test]
    fn kummer_frozen_value() {
        let v = kummer_oracle(0.5, 1.0, -1.0).unwrap();
        assert!((v - KUMMER_HALF_ONE_MINUS_ONE).abs() <= 1e-15, "{v:.17e}");
        // M(1/2; 1; -z) = e^{-z/2} I_0(z/2)
        let i0: f64 = (0..40)
            .map(|k| {
                let f: f64 = (1..=k).map(|j| j as f64).product();
                0.25f64.powi(2 * k) / (f * f)
            })
            .sum();
        assert!((v - (-0.5f64).exp() * i0).abs() < 1e-15);
    }

    #[test]
    fn kummer_contiguous_relation() {
        for &a in &[-2.5, -0.3, 0.7, 1.5, 3.0] {
            for &g in &[0.5, 1.5, 2.25] {
                for &z in &[-5.0, -1.0, 0.5, 3.0] {
                    let m = kummer_oracle(a, g, z).unwrap();
                    let m1 = kummer_oracle(a + 1.0, g, z).unwrap();
                    let m2 = kummer_oracle(a + 1.0, g + 1.0, z).unwrap();
                    let lhs = a * m1 - a * m - z * (a / g) * m2;
                    let scale = (a * m1).abs().max((a * m).abs()).max((z * a / g * m2).abs());
                    assert!(lhs.abs() <= 1e-10 * scale, "a={a} g={g} z={z}");
                }
            }
        }
    }

    #[test]
    fn origin_point_is_exact() {
        let q = p(2.0, 1.0, 1.5, 3.0, 0.25);
        let r = cross_validate(
            &ParamGrid::single(q, SolutionKind::FirstKind, 0.0),
            &Truncation::default(),
            &NestedTruncation::default(),
        );
        assert_eq!(r.max_rel_err, 0.0);
        assert_eq!(r.evaluated(), 1);
    }

    #[test]
    fn invalid_point_is_recorded() {
        let mut g = ParamGrid::default();
        g.nu = vec![-1.0, 0.5];
        g.kinds = vec![SolutionKind::FirstKind];
        let r = cross_validate(&g, &Truncation::default(), &NestedTruncation::default());
        assert_eq!(r.records.len(), g.len());
        assert!(r.failures().count() > 0);
        assert!(r
            .failures()
            .all(|f| matches!(f.outcome, Err(GchError::KindRestriction { .. }))));
        assert!(r.evaluated() > 0);
    }

    #[test]
    fn default_grid_size() {
        let g = ParamGrid::default();
        assert_eq!(g.len() / g.kinds.len(), 384);
    }

    #[test]
    fn wronskian_matches_abel() {
        // W = C x^{-nu} exp(-mu x^2/2 - eps x)
        let q = p(-1.0, 0.5, 0.5, 0.7, 0.3);
        let nt = NestedTruncation::default();
        let abel = |x: f64| {
            let qw = |s: f64| eval_qw_infinite(&q, s, &nt).unwrap().value;
            let rw = |s: f64| eval_rw_infinite(&q, s, &nt).unwrap().value;
            let h = 1e-5;
            let w = qw(x) * (rw(x + h) - rw(x - h)) / (2.0 * h)
                - (qw(x + h) - qw(x - h)) / (2.0 * h) * rw(x);
            w * x.powf(q.nu) * (0.5 * q.mu * x * x + q.epsilon * x).exp()
        };
        let c0 = abel(0.3);
        for x in [0.5, 0.8, 1.0] {
            assert!((abel(x) - c0).abs() <= 1e-7 * c0.abs(), "x={x}");
        }
        assert!(wronskian_scaled(&q, 0.5, 1e-5, &nt).unwrap().abs() > 1e-6);
    }
}
