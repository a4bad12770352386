//! Gamma-function helpers on top of `libm`.

use crate::error::{GchError, Result};
use crate::params::is_nonpositive_integer;

/// `ln|Gamma(x)|` and the sign of `Gamma(x)`.
pub(crate) fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (lg, sign) = libm::lgamma_r(x);
    (lg, if sign < 0 { -1.0 } else { 1.0 })
}

/// `Gamma(a) / Gamma(b)`. A pole in the numerator is a normalization pole; a
/// pole in the denominator makes the ratio vanish.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if is_nonpositive_integer(a) {
        return Err(GchError::NormalizationPole { arg: a });
    }
    if is_nonpositive_integer(b) {
        return Ok(0.0);
    }
    if a.abs() < 150.0 && b.abs() < 150.0 {
        let ga = libm::tgamma(a);
        let gb = libm::tgamma(b);
        if ga.is_finite() && gb.is_finite() && gb != 0.0 {
            return Ok(ga / gb);
        }
    }
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    Ok(sa * sb * (la - lb).exp())
}
