use thiserror::Error;

use crate::params::SolutionKind;

pub type Result<T> = std::result::Result<T, GchError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GchError {
    /// A recurrence denominator `(n+1+λ)(n+ν+λ)` vanished.
    #[error("recurrence pole at n = {n} (lambda = {lambda}, nu = {nu})")]
    Pole { n: usize, lambda: f64, nu: f64 },

    #[error("{kind} solution requires {rule} (got nu = {nu})")]
    KindRestriction {
        kind: SolutionKind,
        nu: f64,
        rule: &'static str,
    },

    #[error("parameter `{field}` is not finite ({value})")]
    NonFinite { field: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Pochhammer ratio ({a})_{m} / ({a})_{n} is indeterminate: denominator vanishes")]
    Indeterminate { a: f64, m: usize, n: usize },

    #[error("normalization prefactor has a Gamma pole at argument {arg}")]
    NormalizationPole { arg: f64 },

    #[error("beta sequence inconsistent with Omega at order {order}: {detail}")]
    BetaMismatch { order: usize, detail: String },

    #[error("Omega = {omega_cap} does not terminate the B chain (beta_0 = {beta0} is not a nonnegative integer)")]
    NoTermination { omega_cap: f64, beta0: f64 },

    #[error("degenerate coupling: {0}")]
    DegenerateCoupling(&'static str),

    #[error("wavefunction tail has not decayed at r_max = {r_max}: |psi(r_max)| / max|psi| = {ratio:e}")]
    TailNotDecayed { r_max: f64, ratio: f64 },

    #[error("Gamma pole: gamma = {0} is a non-positive integer")]
    GammaPole(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}
