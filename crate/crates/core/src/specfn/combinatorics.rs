use std::sync::OnceLock;

use crate::{Error, Result};

const TABLE_LEN: usize = 171;

fn ln_factorial_table() -> &'static [f64; TABLE_LEN] {
    static TABLE: OnceLock<[f64; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; TABLE_LEN];
        let mut acc = 1.0f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            acc *= n as f64;
            *slot = acc.ln();
        }
        table
    })
}

/// `ln(n!)`. Tabulated from exact products up to 170, Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE_LEN {
        return ln_factorial_table()[n as usize];
    }
    let x = n as f64 + 1.0;
    stirling_ln_gamma(x)
}

/// `n!` as a float; exact up to 20, overflows to infinity past 170.
pub fn factorial(n: u64) -> f64 {
    match n {
        0..=20 => (1..=n).product::<u64>() as f64,
        21..=170 => ln_factorial(n).exp(),
        _ => f64::INFINITY,
    }
}

/// Stirling series for `ln Γ(x)`, accurate to double precision for `x > 10`.
fn stirling_ln_gamma(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `ln Γ(x)` for positive real `x`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma_r(x).0
}

/// Binomial coefficient `C(n, k)`.
///
/// Exact (integer arithmetic) while the result fits in 128 bits, log-space otherwise.
pub fn binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::arg("k", format!("{k} exceeds n = {n}")));
    }
    let k = k.min(n - k);
    if n <= 120 {
        let mut c: u128 = 1;
        for i in 0..k {
            // c·(n-i) is divisible by (i+1) at every step.
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return Ok(c as f64);
    }
    Ok((ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2).unwrap(), 6.0);
        assert_eq!(binomial(9, 0).unwrap(), 1.0);
        assert_eq!(binomial(9, 9).unwrap(), 1.0);
        assert_eq!(binomial(20, 10).unwrap(), 184_756.0);
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn large_binomial_uses_log_space() {
        let exact = binomial(120, 60).unwrap();
        let logged = (ln_factorial(120) - 2.0 * ln_factorial(60)).exp();
        assert!((exact / logged - 1.0).abs() < 1e-12);
        assert!(binomial(400, 3).unwrap() - 10_586_800.0 < 1e-3 * 10_586_800.0);
    }

    #[test]
    fn factorials_are_exact_while_small() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000.0);
        assert!(factorial(171).is_infinite());
    }

    #[test]
    fn table_joins_stirling_smoothly() {
        // ln(171!) - ln(170!) = ln 171
        let step = ln_factorial(171) - ln_factorial(170);
        assert!((step - 171f64.ln()).abs() < 1e-9);
    }
}
