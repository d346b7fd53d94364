//! Special functions used by the closed-form metrics.
//!
//! Everything here is a pure function of its arguments. Only real arguments
//! are supported; the gamma-family functions only need integer orders.

mod combinatorics;
mod expint;
mod gamma;
mod gaussian;
mod marcum;

pub use combinatorics::{binomial, factorial, ln_factorial, ln_gamma};
pub use expint::{ei_standard, exp_integral_e1, exp_integral_ei, scaled_e1};
pub use gamma::{
    lower_incomplete_gamma, poisson_ln_pmf, regularized_lower_gamma, regularized_upper_gamma,
};
pub use gaussian::{gaussian_q, gaussian_q_approx, q_approx_coefficient, Q_APPROX_A, Q_APPROX_B};
pub use marcum::{marcum_q1, marcum_q1_complement};

use crate::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Condition estimates above this value mark a result as unreliable.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Truncation policy for the infinite series in the closed-form metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Absolute bound on the discarded tail.
    pub abs_tol: f64,
    /// Hard cap on the summation index.
    pub k_max: usize,
}

impl SeriesControl {
    pub fn new(abs_tol: f64, k_max: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(Error::arg("abs_tol", "must be positive and finite"));
        }
        if k_max < 1 {
            return Err(Error::arg("k_max", "must be at least 1"));
        }
        Ok(Self { abs_tol, k_max })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        // The index needed grows like λ·R_o/(1-ρ_f²), which passes 512 well
        // inside the supported parameter ranges; see `analytic::series`.
        Self {
            abs_tol: 1e-12,
            k_max: 100_000,
        }
    }
}

/// Bessel function of the first kind, order zero.
///
/// Backed by the musl-derived implementation in `libm`.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}
