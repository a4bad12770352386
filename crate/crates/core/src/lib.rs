//! Grand confluent hypergeometric (GCH) functions.
//!
//! Solutions of
//!
//! ```text
//! x y'' + (mu x^2 + epsilon x + nu) y' + (Omega x + epsilon omega) y = 0
//! ```
//!
//! are evaluated two independent ways: by running the three-term recurrence of
//! the Frobenius coefficients directly ([`recurrence`]) and by the closed-form
//! nested sums grouped by powers of `eps_tilde = -epsilon x / 2` ([`series`]).
//! [`verify`] cross-checks the two and measures the ODE residual, [`spectra`]
//! applies the B-terminated class to three radial bound-state problems, and
//! [`asymptotics`] carries the two large-index limiting forms.

pub mod asymptotics;
pub mod cli;
pub mod error;
mod gamma;
pub mod params;
pub mod recurrence;
pub mod series;
pub mod spectra;
mod sum;
pub mod verify;

pub use error::{GchError, Result};
pub use gamma::gamma_ratio;
pub use params::{
    coefficient_a, coefficient_b, indicial_roots, validate, DerivedVars, GchParams, SolutionKind,
    ValidatedParams,
};
pub use recurrence::{coefficients, detect_termination, sum_series, EvalResult, Truncation};
pub use series::{
    betas_from_omega, eval_general, eval_qw_infinite, eval_qw_poly, eval_rw_infinite, nested_coefficients,
    eval_rw_poly, pochhammer_ratio, BetaSequence, BetaSource, NestedTruncation,
};
