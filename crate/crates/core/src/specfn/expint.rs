//! Exponential integrals.
//!
//! Two sign conventions meet in the capacity formulas. The function named
//! `Ei` in the closed forms is defined there as `∫_γ^∞ e^{-t}/t dt`; evaluated
//! at a negative argument `γ = -z` it is used as the familiar `E1(z)`. The
//! standard `Ei(x) = -PV∫_{-x}^∞ e^{-t}/t dt` satisfies `Ei(-z) = -E1(z)`.

use super::EULER_GAMMA;
use crate::{Error, Result};

/// `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::arg("x", format!("E1 needs x > 0, got {x}")));
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok((-x).exp() * e1_continued_fraction(x))
    }
}

/// `e^x E1(x)` for `x > 0`, finite for arguments where `E1` itself underflows.
pub fn scaled_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::arg("x", format!("e^x E1(x) needs x > 0, got {x}")));
    }
    if x <= 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(e1_continued_fraction(x))
    }
}

/// The exponential integral in the convention of the capacity closed forms,
/// evaluated at a strictly negative argument: returns `E1(-x)`.
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::arg("x", format!("argument must be negative, got {x}")));
    }
    exp_integral_e1(-x)
}

/// Standard exponential integral `Ei(x)` for real `x ≠ 0`.
pub fn ei_standard(x: f64) -> Result<f64> {
    if x == 0.0 || x.is_nan() {
        return Err(Error::arg("x", "Ei is singular at 0"));
    }
    if x < 0.0 {
        return Ok(-exp_integral_e1(-x)?);
    }
    if x <= 40.0 {
        // γ + ln x + Σ x^k/(k·k!)
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..400 {
            term *= x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return Ok(EULER_GAMMA + x.ln() + sum);
    }
    // Asymptotic e^x/x · Σ k!/x^k, truncated at the smallest term.
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..(x as usize) {
        let next = term * k as f64 / x;
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    Ok(x.exp() / x * sum)
}

fn e1_series(x: f64) -> f64 {
    // -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..60 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Modified Lentz evaluation of the continued fraction for `e^x E1(x)`, `x > 1`.
fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_errors() {
        assert!(exp_integral_ei(0.0).is_err());
        assert!(exp_integral_ei(2.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
        assert!(ei_standard(0.0).is_err());
    }

    #[test]
    fn series_and_fraction_agree_at_the_switch() {
        let below = e1_series(1.0);
        let above = (-1.0f64).exp() * e1_continued_fraction(1.0 + 1e-12);
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn scaled_form_survives_large_arguments() {
        let v = scaled_e1(800.0).unwrap();
        // e^x E1(x) ~ 1/x (1 - 1/x + 2/x² - 6/x³ …)
        let x: f64 = 800.0;
        let approx = (1.0 - 1.0 / x + 2.0 / x.powi(2) - 6.0 / x.powi(3)) / x;
        assert!((v - approx).abs() < 1e-13);
        assert_eq!(exp_integral_e1(800.0).unwrap(), 0.0);
    }

    #[test]
    fn standard_ei_positive_values() {
        // Ei(1) = 1.8951178163559368
        assert!((ei_standard(1.0).unwrap() - 1.895_117_816_355_936_8).abs() < 1e-13);
        // Ei(50) via the asymptotic branch vs the series just below the switch
        let hi = ei_standard(50.0).unwrap();
        assert!((hi / 1.058_563_689_713_169e20 - 1.0).abs() < 1e-9);
        assert!((ei_standard(20.0).unwrap() / 25_615_652.664_056_595 - 1.0).abs() < 1e-12);
        assert!((ei_standard(-3.0).unwrap() + 0.013_048_381_094_197_039).abs() < 1e-15);
    }
}
