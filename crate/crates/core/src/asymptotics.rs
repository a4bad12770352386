//! Large-index limiting forms of the series and the error function they use.
//!
//! For `n >> 1` the recurrence coefficients behave like `A ~ -epsilon/n` and
//! `B ~ -mu/n`. Dropping one of the two channels gives a closed form:
//!
//! * small `|mu|` (or `|mu| << |epsilon|`): `y ~ x (exp(-epsilon x) - 1)`
//! * small `|epsilon|` (or `|epsilon| << |mu|`):
//!   `y ~ 1 + sqrt(pi t) erf(sqrt t) exp(t)`, `t = -mu x^2 / 2`

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Which channel of the recurrence is dropped. Always chosen by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticRegime {
    /// `|mu| << 1` or `|mu| << |epsilon|`: only the A channel survives.
    SmallMu,
    /// `|epsilon| << 1` or `|epsilon| << |mu|`: only the B channel survives.
    SmallEps,
}

/// `exp(y^2) erfc(y)` for `y >= 3` by the Laplace continued fraction
/// (modified Lentz).
fn erfc_scaled_cf(y: f64) -> f64 {
    // erfc(y) = exp(-y^2)/sqrt(pi) * 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...))))
    let tiny = 1e-300;
    let mut f = y;
    let mut c = y;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = y + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = y + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * PI.sqrt())
}

/// `erf(y)` for `|y| < 3`: `2/sqrt(pi) exp(-y^2) sum 2^n y^{2n+1} / (2n+1)!!`.
/// Every term is positive so nothing cancels.
fn erf_series(y: f64) -> f64 {
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    for n in 1..200 {
        term *= 2.0 * y2 / (2 * n + 1) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-y2).exp() * sum
}

/// Error function, accurate to about 1e-15 absolute.
pub fn erf(y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    let a = y.abs();
    let v = if a < 3.0 {
        erf_series(a)
    } else if a > 27.0 {
        1.0
    } else {
        1.0 - (-a * a).exp() * erfc_scaled_cf(a)
    };
    v.copysign(y)
}

/// `2 sqrt(s) D(sqrt s) = sqrt(pi s) erfi(sqrt s) exp(-s)` for `s >= 0`,
/// where `D` is Dawson's integral.
fn two_root_dawson(s: f64) -> f64 {
    let y = s.sqrt();
    if y < 6.0 {
        // erfi(y) = 2/sqrt(pi) sum y^{2n+1} / (n! (2n+1)), all terms positive
        let mut term = y;
        let mut sum = y;
        for n in 1..400 {
            let nf = n as f64;
            term *= s / nf;
            let t = term / (2.0 * nf + 1.0);
            sum += t;
            if t < 1e-17 * sum {
                break;
            }
        }
        2.0 * y * (-s).exp() * sum
    } else {
        // D(y) ~ 1/(2y) sum (2k-1)!! / (2y^2)^k, stop at the smallest term
        let inv = 1.0 / (2.0 * s);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            let next = term * (2 * k - 1) as f64 * inv;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum
    }
}

/// Small-`|mu|` limit with `c_0 = 0`, `c_1 = 1`, taken as printed:
/// `x (exp(-epsilon x) - 1)`.
pub fn asym_small_mu(epsilon: f64, x: f64) -> f64 {
    x * ((-epsilon * x).exp() - 1.0)
}

/// Resummation of `c_{n+1} = -(epsilon/n) c_n` from `c_1 = 1`, which is
/// `x exp(-epsilon x)`. It differs from [`asym_small_mu`] by the `-x` term.
pub fn asym_small_mu_resummed(epsilon: f64, x: f64) -> f64 {
    x * (-epsilon * x).exp()
}

/// Small-`|epsilon|` limit with `c_0 = 1`:
/// `1 + sqrt(pi t) erf(sqrt t) exp(t)`, `t = -mu x^2 / 2`.
///
/// For `t < 0` the product `sqrt(pi t) erf(sqrt t)` is continued through
/// `erf(i s) = i erfi(s)` and stays real: `1 - sqrt(pi |t|) erfi(sqrt|t|) exp(t)`.
pub fn asym_small_eps(mu: f64, x: f64) -> f64 {
    let t = -0.5 * mu * x * x;
    if t >= 0.0 {
        let r = t.sqrt();
        1.0 + (PI * t).sqrt() * erf(r) * t.exp()
    } else {
        1.0 - two_root_dawson(-t)
    }
}

/// Dispatches on an explicitly chosen regime.
pub fn asymptote(regime: AsymptoticRegime, mu: f64, epsilon: f64, x: f64) -> f64 {
    match regime {
        AsymptoticRegime::SmallMu => asym_small_mu(epsilon, x),
        AsymptoticRegime::SmallEps => asym_small_eps(mu, x),
    }
}
