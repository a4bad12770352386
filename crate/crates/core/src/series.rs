//! Closed-form nested sums for the GCH series.
//!
//! The Frobenius series is regrouped by transcendent order: the order-`n`
//! piece collects every path through the recurrence that uses exactly `n`
//! A-steps, so it carries `eps_tilde^n`. Inside an order the B-steps form
//! hypergeometric chains in `z` whose terms are Pochhammer ratios
//!
//! ```text
//! y(x) = c0 x^lambda { sum_{i0} P0(i0) z^{i0}
//!                    + sum_{i0} a0(i0) P0(i0) sum_{i1 >= i0} R1(i0 -> i1) z^{i1} eps_tilde
//!                    + ... }
//! ```
//!
//! with `P0(i) = (Omega/2mu + lambda/2)_i / ((1 + lambda/2)_i (gamma + lambda/2)_i)`
//! and the order-`k` chain ratio
//! `R_k(i -> j) = (a_k)_j (1 + k/2 + lambda/2)_i (k/2 + gamma + lambda/2)_i / ((a_k)_i ...)_j`,
//! `a_k = Omega/2mu + k/2 + lambda/2`.
//!
//! The nested sums are evaluated order by order. For each order the running
//! vector `V_k(i)` holds the sum over all earlier indices ending at `i_k = i`;
//! it obeys `V_k(i) = r_k(i-1) V_k(i-1) + a_{k-1}(i) V_{k-1}(i)` where `r_k` is
//! the one-step chain ratio, so each summand costs O(1) and no Pochhammer
//! product is ever formed in full.
//!
//! In the B-terminated (polynomial) class the chain numerator `j + a_k` is
//! replaced by `j - beta_k`, which vanishes exactly at `j = beta_k` and cuts
//! every chain that starts at or below `beta_k`.

use serde::{Deserialize, Serialize};

use crate::error::{GchError, Result};
use crate::gamma::{gamma_ratio, ln_gamma_signed};
use crate::params::{is_nonpositive_integer, nearest_integer, validate, GchParams, SolutionKind};
use crate::recurrence::{detect_termination, real_power, EvalResult};
use crate::sum::NeumaierSum;

/// Truncation of the nested sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedTruncation {
    /// Highest transcendent order (power of `eps_tilde`) evaluated.
    pub max_order_n: usize,
    /// Cap on each inner index `i_k`.
    pub max_inner: usize,
    /// Stop adding orders once two consecutive ones fall below `rel_tol * |partial|`.
    pub rel_tol: f64,
}

impl Default for NestedTruncation {
    fn default() -> Self {
        Self {
            max_order_n: 150,
            max_inner: 400,
            rel_tol: 1e-15,
        }
    }
}

impl NestedTruncation {
    pub fn new(max_order_n: usize, max_inner: usize, rel_tol: f64) -> Result<Self> {
        let t = Self {
            max_order_n,
            max_inner,
            rel_tol,
        };
        t.check()?;
        Ok(t)
    }

    pub fn check(&self) -> Result<()> {
        if self.max_order_n < 2 {
            return Err(GchError::Config(format!(
                "max_order_n must be >= 2 (got {})",
                self.max_order_n
            )));
        }
        if self.max_inner < 4 {
            return Err(GchError::Config(format!(
                "max_inner must be >= 4 (got {})",
                self.max_inner
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(GchError::Config(format!(
                "rel_tol must lie in (0, 1) (got {})",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BetaSource {
    UserSupplied,
    DerivedFromOmega,
}

/// Termination indices `beta_0, beta_1, ...` of the per-order B chains.
///
/// `None` marks an order whose chain is not cut by a vanishing B coefficient;
/// that order is summed with the infinite-series weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSequence {
    pub betas: Vec<Option<usize>>,
    pub source: BetaSource,
}

impl BetaSequence {
    pub fn user(betas: impl IntoIterator<Item = usize>) -> Self {
        Self {
            betas: betas.into_iter().map(Some).collect(),
            source: BetaSource::UserSupplied,
        }
    }

    pub fn beta0(&self) -> Option<usize> {
        self.betas.first().copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// For derived sequences `2 beta_k + k` must be the same for every present order.
    pub fn check(&self) -> Result<()> {
        if self.source != BetaSource::DerivedFromOmega {
            return Ok(());
        }
        let mut level = None;
        for (k, b) in self.betas.iter().enumerate() {
            if let Some(b) = b {
                let l = 2 * b + k;
                match level {
                    None => level = Some(l),
                    Some(l0) if l0 != l => {
                        return Err(GchError::BetaMismatch {
                            order: k,
                            detail: format!("2 beta_k + k = {l} differs from {l0}"),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// Termination indices `beta_k = (-Omega/mu - lambda - k) / 2`, `k < count`.
pub fn betas_from_omega(p: &GchParams, lambda: f64, count: usize) -> Result<BetaSequence> {
    if p.mu == 0.0 {
        return Err(GchError::Domain(
            "mu = 0: the termination condition needs mu != 0".to_string(),
        ));
    }
    let level = -p.omega_cap / p.mu - lambda;
    let beta0 = 0.5 * level;
    match nearest_integer(beta0) {
        Some(b) if b >= 0 => {}
        _ => {
            return Err(GchError::NoTermination {
                omega_cap: p.omega_cap,
                beta0,
            })
        }
    }
    let betas = (0..count.max(1))
        .map(|k| match nearest_integer(level - k as f64) {
            Some(twice) if twice >= 0 && twice % 2 == 0 => Some((twice / 2) as usize),
            _ => None,
        })
        .collect();
    Ok(BetaSequence {
        betas,
        source: BetaSource::DerivedFromOmega,
    })
}

/// `(a)_m / (a)_n`, overflow-safe.
///
/// Short telescoped runs are multiplied out; long runs go through log-gamma
/// differences with the sign carried separately.
pub fn pochhammer_ratio(a: f64, m: usize, n: usize) -> Result<f64> {
    let vanishes = |k: usize| is_nonpositive_integer(a) && (k as f64) > -a;
    if vanishes(n) {
        return Err(GchError::Indeterminate { a, m, n });
    }
    if vanishes(m) {
        return Ok(0.0);
    }
    if m == n {
        return Ok(1.0);
    }
    let (lo, hi, invert) = if m > n { (n, m, false) } else { (m, n, true) };

    if hi - lo <= 64 {
        let mut prod = 1.0f64;
        for j in lo..hi {
            prod *= a + j as f64;
        }
        if prod.is_finite() && prod != 0.0 {
            return Ok(if invert { 1.0 / prod } else { prod });
        }
    }

    let (log_mag, sign) = if is_nonpositive_integer(a) || hi - lo <= 64 {
        let mut log_mag = 0.0;
        let mut sign = 1.0;
        for j in lo..hi {
            let f = a + j as f64;
            log_mag += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        (log_mag, sign)
    } else {
        let (l_hi, s_hi) = ln_gamma_signed(a + hi as f64);
        let (l_lo, s_lo) = ln_gamma_signed(a + lo as f64);
        (l_hi - l_lo, s_hi * s_lo)
    };
    let log_mag = if invert { -log_mag } else { log_mag };
    Ok(sign * log_mag.exp())
}

/// Chain numerator for one order: free Pochhammer parameter or a termination index.
#[derive(Debug, Clone, Copy)]
enum Chain {
    Free(f64),
    Terminating(usize),
}

impl Chain {
    fn numerator(self, j: usize) -> f64 {
        match self {
            Chain::Free(a) => j as f64 + a,
            Chain::Terminating(beta) => j as f64 - beta as f64,
        }
    }
}

/// Per-point inputs of the nested sums.
struct Bracket {
    half_lambda: f64,
    gamma: f64,
    half_omega: f64,
    z: f64,
    eps_tilde: f64,
    lambda: f64,
}

struct BracketOut {
    total: f64,
    orders: Vec<f64>,
    terms: usize,
    last_order_mag: f64,
    converged: bool,
}

const INNER_TAIL: f64 = 1e-18;

fn pole(n2: f64, lambda: f64, nu: f64) -> GchError {
    // denominators are (n+1+lambda)(n+nu+lambda) at recurrence index n
    GchError::Pole {
        n: n2.max(0.0) as usize,
        lambda,
        nu,
    }
}

impl Bracket {
    fn nu(&self) -> f64 {
        2.0 * self.gamma - 1.0
    }

    /// One step `j -> j+1` of the order-`k` chain, including the factor `z`.
    fn chain_ratio(&self, k: usize, chain: Chain, j: usize) -> Result<f64> {
        let jf = j as f64;
        let hk = 0.5 * k as f64;
        let den = (jf + 1.0 + hk + self.half_lambda) * (jf + hk + self.gamma + self.half_lambda);
        if den == 0.0 {
            return Err(pole((2 * j + k + 1) as f64, self.lambda, self.nu()));
        }
        Ok(self.z * chain.numerator(j) / den)
    }

    /// Weight of the A-step leaving order `k` at index `i`, including `eps_tilde`.
    fn a_weight(&self, k: usize, i: usize) -> Result<f64> {
        let iff = i as f64;
        let hk = 0.5 * k as f64;
        let num = iff + self.half_lambda + self.half_omega + hk;
        let den = (iff + 0.5 + self.half_lambda + hk) * (iff - 0.5 + self.gamma + hk + self.half_lambda);
        if den == 0.0 {
            return Err(pole((2 * i + k) as f64, self.lambda, self.nu()));
        }
        Ok(self.eps_tilde * num / den)
    }

    /// Runs the order recursion. `chain_of(k)` gives the chain of order `k`, or
    /// `None` when no further order is available.
    fn evaluate(
        &self,
        nt: &NestedTruncation,
        chain_of: impl Fn(usize) -> Option<Chain>,
    ) -> Result<BracketOut> {
        let cap = nt.max_inner;
        let mut inner_capped = false;
        let mut terms = 0usize;

        // order 0
        let chain0 = chain_of(0).expect("order 0 always has a chain");
        let mut prev = Vec::with_capacity(64);
        prev.push(1.0);
        if self.z != 0.0 {
            let mut small = 0usize;
            let mut max_abs: f64 = 1.0;
            for i in 1..=cap {
                let v = prev[i - 1] * self.chain_ratio(0, chain0, i - 1)?;
                if v == 0.0 {
                    break;
                }
                prev.push(v);
                max_abs = max_abs.max(v.abs());
                if v.abs() <= INNER_TAIL * max_abs {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                if i == cap {
                    inner_capped = true;
                }
            }
        }
        terms += prev.len();

        let mut orders = Vec::new();
        let mut total = NeumaierSum::new();
        let y0 = sum_vec(&prev);
        orders.push(y0);
        total.add(y0);

        let mut small_orders = 0usize;
        let mut converged = false;
        let mut last_order_mag = y0.abs();

        if self.eps_tilde == 0.0 {
            converged = !inner_capped;
            return Ok(BracketOut {
                total: total.total(),
                orders,
                terms,
                last_order_mag: 0.0,
                converged,
            });
        }

        for k in 1..=nt.max_order_n {
            let Some(chain) = chain_of(k) else {
                // the order list ran out; what was summed is the whole expression
                converged = !inner_capped;
                break;
            };
            let mut cur: Vec<f64> = Vec::with_capacity(prev.len() + 8);
            let mut max_abs: f64 = 0.0;
            let mut small = 0usize;
            for i in 0..=cap {
                let feed = match prev.get(i) {
                    Some(&v) if v != 0.0 => self.a_weight(k - 1, i)? * v,
                    _ => 0.0,
                };
                let carried = if i == 0 || self.z == 0.0 {
                    0.0
                } else {
                    let last = cur[i - 1];
                    if last == 0.0 {
                        0.0
                    } else {
                        last * self.chain_ratio(k, chain, i - 1)?
                    }
                };
                let v = carried + feed;
                let past_feed = i + 1 >= prev.len();
                if past_feed && v == 0.0 {
                    break;
                }
                cur.push(v);
                max_abs = max_abs.max(v.abs());
                if past_feed && v.abs() <= INNER_TAIL * max_abs {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                if i == cap {
                    inner_capped = true;
                }
            }
            terms += cur.len();
            let yk = sum_vec(&cur);
            orders.push(yk);
            total.add(yk);
            last_order_mag = yk.abs();

            if cur.iter().all(|&v| v == 0.0) {
                converged = !inner_capped;
                break;
            }
            if yk.abs() < nt.rel_tol * total.total().abs() {
                small_orders += 1;
                if small_orders >= 2 {
                    converged = !inner_capped;
                    break;
                }
            } else {
                small_orders = 0;
            }
            prev = cur;
        }

        Ok(BracketOut {
            total: total.total(),
            orders,
            terms,
            last_order_mag,
            converged,
        })
    }
}

fn sum_vec(v: &[f64]) -> f64 {
    let mut s = NeumaierSum::new();
    for &x in v {
        s.add(x);
    }
    s.total()
}

fn bracket_for(p: &GchParams, lambda: f64, x: f64) -> Bracket {
    let d = p.derived();
    Bracket {
        half_lambda: 0.5 * lambda,
        gamma: d.gamma,
        half_omega: 0.5 * p.omega,
        z: d.z_of(x),
        eps_tilde: d.eps_tilde_of(x),
        lambda,
    }
}

fn free_chains(q: f64, half_lambda: f64) -> impl Fn(usize) -> Option<Chain> {
    move |k| Some(Chain::Free(q + 0.5 * k as f64 + half_lambda))
}

fn finish(out: BracketOut, prefactor: f64, terminated_at: Option<usize>) -> EvalResult {
    EvalResult {
        value: out.total,
        terms_used: out.terms,
        last_term_mag: out.last_order_mag,
        converged: out.converged,
        terminated_at,
        order_values: out.orders,
    }
    .scaled(prefactor)
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(GchError::Domain(format!("x = {x} is not finite")));
    }
    Ok(())
}

/// General infinite-series nested form at indicial root `lambda`, scaled by `c0 x^lambda`.
///
/// `order_values[n]` holds the order-`n` piece `y_n(x)`.
pub fn eval_general(
    p: &GchParams,
    lambda: f64,
    c0: f64,
    x: f64,
    nt: &NestedTruncation,
) -> Result<EvalResult> {
    p.check_finite()?;
    nt.check()?;
    check_x(x)?;
    let q = p.omega_over_two_mu()?;
    let prefactor = c0 * real_power(x, lambda)?;
    let b = bracket_for(p, lambda, x);
    let out = b.evaluate(nt, free_chains(q, b.half_lambda))?;
    Ok(finish(out, prefactor, detect_termination(p, lambda)))
}

/// `z^{1-gamma}` for the second-kind prefactor, real-valued or a domain error.
fn z_power(z: f64, exponent: f64) -> Result<f64> {
    if z > 0.0 {
        return Ok(z.powf(exponent));
    }
    if exponent == exponent.round() {
        if z == 0.0 && exponent < 0.0 {
            return Err(GchError::Domain(format!(
                "z^(1-gamma) is singular at z = 0 for 1-gamma = {exponent}"
            )));
        }
        return Ok(z.powi(exponent as i32));
    }
    if z == 0.0 {
        return if exponent > 0.0 {
            Ok(0.0)
        } else {
            Err(GchError::Domain(format!(
                "z^(1-gamma) is singular at z = 0 for 1-gamma = {exponent}"
            )))
        };
    }
    Err(GchError::Domain(format!(
        "z^(1-gamma) is not real for z = {z} < 0 and 1-gamma = {exponent}"
    )))
}

/// First-kind infinite series, normalized by `c0 = Gamma(gamma - Omega/2mu) / Gamma(gamma)`.
pub fn eval_qw_infinite(p: &GchParams, x: f64, nt: &NestedTruncation) -> Result<EvalResult> {
    validate(p, SolutionKind::FirstKind)?;
    let q = p.omega_over_two_mu()?;
    let g = p.gamma();
    let c0 = gamma_ratio(g - q, g)?;
    eval_general(p, 0.0, c0, x, nt)
}

/// Second-kind infinite series,
/// `z^{1-gamma} Gamma(1 - Omega/2mu) / Gamma(2 - gamma) * {...}` at `lambda = 1 - nu`.
///
/// Written in `z` rather than `x`, so it is defined for negative `x` whenever
/// `z > 0`.
pub fn eval_rw_infinite(p: &GchParams, x: f64, nt: &NestedTruncation) -> Result<EvalResult> {
    let v = validate(p, SolutionKind::SecondKind)?;
    nt.check()?;
    check_x(x)?;
    let q = p.omega_over_two_mu()?;
    let g = p.gamma();
    let b = bracket_for(p, v.lambda, x);
    let prefactor = z_power(b.z, 1.0 - g)? * gamma_ratio(1.0 - q, 2.0 - g)?;
    let out = b.evaluate(nt, free_chains(q, b.half_lambda))?;
    Ok(finish(out, prefactor, detect_termination(p, v.lambda)))
}

fn check_against_omega(p: &GchParams, lambda: f64, betas: &BetaSequence) -> Result<()> {
    betas.check()?;
    if betas.source != BetaSource::DerivedFromOmega {
        return Ok(());
    }
    for (k, b) in betas.betas.iter().enumerate() {
        if let Some(b) = b {
            let implied = -p.mu * (2.0 * *b as f64 + k as f64 + lambda);
            let scale = p.omega_cap.abs().max(p.mu.abs()).max(1.0);
            if (implied - p.omega_cap).abs() > 1e-9 * scale {
                return Err(GchError::BetaMismatch {
                    order: k,
                    detail: format!(
                        "beta_{k} = {b} implies Omega = {implied}, parameters carry {}",
                        p.omega_cap
                    ),
                });
            }
        }
    }
    Ok(())
}

fn poly_chains(
    p: &GchParams,
    betas: &BetaSequence,
    half_lambda: f64,
) -> Result<impl Fn(usize) -> Option<Chain>> {
    let needs_free = betas.betas.iter().any(Option::is_none);
    let q = if needs_free {
        p.omega_over_two_mu()?
    } else {
        0.0
    };
    let list = betas.betas.clone();
    Ok(move |k: usize| {
        list.get(k).map(|b| match b {
            Some(beta) => Chain::Terminating(*beta),
            None => Chain::Free(q + 0.5 * k as f64 + half_lambda),
        })
    })
}

/// First-kind B-terminated series with `c0 = Gamma(gamma + beta_0) / Gamma(gamma)`.
///
/// Orders beyond the length of `betas` are not evaluated.
pub fn eval_qw_poly(
    p: &GchParams,
    betas: &BetaSequence,
    x: f64,
    nt: &NestedTruncation,
) -> Result<EvalResult> {
    let v = validate(p, SolutionKind::FirstKind)?;
    nt.check()?;
    check_x(x)?;
    check_against_omega(p, v.lambda, betas)?;
    let beta0 = betas.beta0().ok_or_else(|| GchError::BetaMismatch {
        order: 0,
        detail: "beta_0 must be present".to_string(),
    })?;
    let g = p.gamma();
    let c0 = gamma_ratio(g + beta0 as f64, g)?;
    let b = bracket_for(p, v.lambda, x);
    let out = b.evaluate(nt, poly_chains(p, betas, b.half_lambda)?)?;
    Ok(finish(out, c0, detect_termination(p, v.lambda)))
}

/// Second-kind B-terminated series,
/// `z^{1-gamma} Gamma(psi_0 + 2 - gamma) / Gamma(2 - gamma) * {...}` at `lambda = 1 - nu`.
pub fn eval_rw_poly(
    p: &GchParams,
    psis: &BetaSequence,
    x: f64,
    nt: &NestedTruncation,
) -> Result<EvalResult> {
    let v = validate(p, SolutionKind::SecondKind)?;
    nt.check()?;
    check_x(x)?;
    check_against_omega(p, v.lambda, psis)?;
    let psi0 = psis.beta0().ok_or_else(|| GchError::BetaMismatch {
        order: 0,
        detail: "psi_0 must be present".to_string(),
    })?;
    let g = p.gamma();
    let b = bracket_for(p, v.lambda, x);
    let prefactor = z_power(b.z, 1.0 - g)? * gamma_ratio(psi0 as f64 + 2.0 - g, 2.0 - g)?;
    let out = b.evaluate(nt, poly_chains(p, psis, b.half_lambda)?)?;
    Ok(finish(out, prefactor, detect_termination(p, v.lambda)))
}

/// Power-series coefficients `c_0 .. c_{count-1}` read off the nested sums.
///
/// The order-`k` term with chain index `i` carries `x^{k + 2i}`, so running the
/// order recursion at `x = 1` and binning `V_k(i)` into `c_{k+2i}` recovers the
/// Frobenius coefficients without touching the recurrence. `betas` selects the
/// polynomial chains; `None` uses the free chains.
pub fn nested_coefficients(
    p: &GchParams,
    lambda: f64,
    c0: f64,
    betas: Option<&BetaSequence>,
    count: usize,
) -> Result<Vec<f64>> {
    p.check_finite()?;
    let mut c = vec![0.0; count];
    if count == 0 {
        return Ok(c);
    }
    let b = bracket_for(p, lambda, 1.0);
    let chain_of: Box<dyn Fn(usize) -> Option<Chain>> = match betas {
        Some(bs) => Box::new(poly_chains(p, bs, b.half_lambda)?),
        None => Box::new(free_chains(p.omega_over_two_mu()?, b.half_lambda)),
    };

    let mut prev: Vec<f64> = Vec::new();
    for k in 0..count {
        let Some(chain) = chain_of(k) else { break };
        let len = (count - 1 - k) / 2 + 1;
        let mut cur = Vec::with_capacity(len);
        for i in 0..len {
            let feed = if k == 0 {
                if i == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                match prev.get(i) {
                    Some(&v) if v != 0.0 => b.a_weight(k - 1, i)? * v,
                    _ => 0.0,
                }
            };
            let carried = if i == 0 || cur[i - 1] == 0.0 {
                0.0
            } else {
                cur[i - 1] * b.chain_ratio(k, chain, i - 1)?
            };
            let v = carried + feed;
            cur.push(v);
            c[k + 2 * i] += c0 * v;
        }
        prev = cur;
    }
    Ok(c)
}

/// `c0` that makes [`eval_general`] at `lambda = 1 - nu` reproduce the
/// second-kind infinite series for `x > 0`.
pub fn rw_infinite_c0(p: &GchParams) -> Result<f64> {
    let q = p.omega_over_two_mu()?;
    let g = p.gamma();
    Ok(real_power(-0.5 * p.mu, 1.0 - g)? * gamma_ratio(1.0 - q, 2.0 - g)?)
}

/// `c0` that makes [`eval_general`] at `lambda = 1 - nu` reproduce the
/// second-kind polynomial series for `x > 0`.
pub fn rw_poly_c0(p: &GchParams, psi0: usize) -> Result<f64> {
    let g = p.gamma();
    Ok(real_power(-0.5 * p.mu, 1.0 - g)? * gamma_ratio(psi0 as f64 + 2.0 - g, 2.0 - g)?)
}
