use std::f64::consts::{PI, SQRT_2};

use super::combinatorics::ln_factorial;
use crate::{Error, Result};

/// First constant of the exponential-polynomial Q approximation.
pub const Q_APPROX_A: f64 = 1.98;
/// Second constant of the exponential-polynomial Q approximation.
pub const Q_APPROX_B: f64 = 1.135;

/// Gaussian tail probability `Q(x) = ½ erfc(x/√2)`.
pub fn gaussian_q(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Coefficient `a_n = (-1)^{n+1} A^n / (B √π (√2)^{n+1} n!)`, `n ≥ 1`.
pub fn q_approx_coefficient(n: u32) -> f64 {
    debug_assert!(n >= 1);
    let ln_mag = n as f64 * Q_APPROX_A.ln()
        - Q_APPROX_B.ln()
        - 0.5 * PI.ln()
        - 0.5 * (n + 1) as f64 * 2f64.ln()
        - ln_factorial(n as u64);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * ln_mag.exp()
}

/// `Q(x) ≈ e^{-x²/2} Σ_{n=1}^{n_a} a_n x^{n-1}` for `x ≥ 0`.
///
/// This is the Taylor expansion of `(1 - e^{-Ax/√2}) e^{-x²/2} / (B √(2π) x)`.
/// With `n_a = 20` the relative error against [`gaussian_q`] stays below 9.5 %
/// on `[0.5, 5]`: the underlying closed form itself is only that accurate.
pub fn gaussian_q_approx(x: f64, n_a: u32) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::arg("x", format!("must be nonnegative, got {x}")));
    }
    if n_a == 0 {
        return Err(Error::arg("n_a", "approximation order must be at least 1"));
    }
    // Horner on the polynomial in x.
    let mut poly = 0.0;
    for n in (1..=n_a).rev() {
        poly = poly * x + q_approx_coefficient(n);
    }
    Ok((-0.5 * x * x).exp() * poly)
}
