//! Reference values for the special functions, computed independently
//! with 30-digit arithmetic and by direct quadrature.

use relaysel::quadrature::{integrate, QuadOptions};
use relaysel::specfn::*;

pub struct Golden {
    pub name: &'static str,
    pub observed: f64,
    pub expected: f64,
    pub tol: f64,
}

impl Golden {
    pub fn passed(&self) -> bool {
        (self.observed - self.expected).abs() <= self.tol
    }
}

fn g(name: &'static str, observed: f64, expected: f64, tol: f64) -> Golden {
    Golden { name, observed, expected, tol }
}

/// `I₀(z) e^{-z}` by its power series; fine for `z ≤ 30`.
fn scaled_i0(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum * (-z).exp()
}

/// `1 - Q₁(a, b)` by integrating the Rician density over `[0, b]`.
pub fn marcum_complement_quadrature(a: f64, b: f64) -> f64 {
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 500 };
    integrate(|x| x * (-0.5 * (x - a) * (x - a)).exp() * scaled_i0(a * x), 0.0, b, opts)
        .unwrap()
        .value
}

pub fn cases() -> Vec<Golden> {
    let mut v = vec![
        g("lower_incomplete_gamma(1, 0)", lower_incomplete_gamma(1, 0.0).unwrap(), 0.0, 0.0),
        g("lower_incomplete_gamma(1, 1)", lower_incomplete_gamma(1, 1.0).unwrap(), 0.632_120_558_828_557_7, 1e-14),
        g("lower_incomplete_gamma(2, 3)", lower_incomplete_gamma(2, 3.0).unwrap(), 0.800_851_726_528_544_2, 1e-14),
        g("bessel_j0(0)", bessel_j0(0.0), 1.0, 0.0),
        g("bessel_j0(first root)", bessel_j0(2.404_825_557_695_773), 0.0, 1e-9),
        g("bessel_j0(1)", bessel_j0(1.0), 0.765_197_686_557_966_6, 1e-14),
        g("exp_integral_ei(-1)", exp_integral_ei(-1.0).unwrap(), 0.219_383_934_395_520_27, 1e-14),
        g("exp_integral_ei(-10)", exp_integral_ei(-10.0).unwrap(), 4.156_968_929_685_324e-6, 1e-18),
        g("gaussian_q(0)", gaussian_q(0.0), 0.5, 0.0),
        g("gaussian_q(1)", gaussian_q(1.0), 0.158_655_253_931_457_05, 1e-15),
        g("gaussian_q(+40)", gaussian_q(40.0), 0.0, 1e-300),
        g("gaussian_q(-40)", gaussian_q(-40.0), 1.0, 0.0),
        // a_1 = A/(2B√π) with A = 1.98, B = 1.135
        g("gaussian_q_approx(0, n)", gaussian_q_approx(0.0, 7).unwrap(), 0.492_112_500_187_029_7, 1e-15),
        g("marcum_q1(0, 1.5)", marcum_q1(0.0, 1.5), (-1.125f64).exp(), 1e-15),
        g("marcum_q1(2, 0)", marcum_q1(2.0, 0.0), 1.0, 0.0),
        g("marcum_q1(1, 2)", marcum_q1(1.0, 2.0), 0.269_012_060_035_91, 1e-10),
        g("binomial(4, 2)", binomial(4, 2).unwrap(), 6.0, 0.0),
        g("binomial(9, 0)", binomial(9, 0).unwrap(), 1.0, 0.0),
        g("ln_factorial(170)", ln_factorial(170), 706.573_062_245_787_3, 706.6 * 1e-10),
    ];
    // Q approximation of order 20 over [0.5, 5]: measured worst relative error 0.0945
    let worst = (0..=90)
        .map(|i| 0.5 + 0.05 * i as f64)
        .map(|x| (gaussian_q_approx(x, 20).unwrap() / gaussian_q(x) - 1.0).abs())
        .fold(0.0, f64::max);
    v.push(g("gaussian_q_approx n_a=20 worst relative error", worst, 0.0, 0.1));
    // Paper convention is the negated standard Ei at the negated argument.
    let conv = (1..=40)
        .map(|i| -0.25 * i as f64)
        .map(|x| (exp_integral_ei(x).unwrap() + ei_standard(x).unwrap()).abs())
        .fold(0.0, f64::max);
    v.push(g("paper Ei(x) = -Ei_standard(x)", conv, 0.0, 1e-15));
    v
}

/// Largest `|Q₁(series) - Q₁(quadrature)|` over a 20×20 grid of `[0, 5]²`.
pub fn marcum_grid_error() -> f64 {
    let pts: Vec<f64> = (0..20).map(|i| 5.0 * i as f64 / 19.0).collect();
    let mut worst: f64 = 0.0;
    for &a in &pts {
        for &b in &pts {
            let q = 1.0 - marcum_complement_quadrature(a, b);
            worst = worst.max((marcum_q1(a, b) - q).abs());
        }
    }
    worst
}
