use super::gamma::{poisson_ln_pmf, regularized_lower_gamma};

/// First-order Marcum Q function `Q₁(a, b)`.
///
/// Evaluated as the Poisson mixture of central chi-square tails,
/// `Q₁(a, b) = Σ_k Pois(k; a²/2) · Q(k+1, b²/2)`. When the result is close to
/// one the complementary sum `Σ_k Pois(k; a²/2) · P(k+1, b²/2)` is taken instead,
/// so whichever of `Q₁` and `1 - Q₁` is small is summed directly.
pub fn marcum_q1(a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if b == 0.0 {
        return 1.0;
    }
    let y = 0.5 * b * b;
    if a == 0.0 {
        return (-y).exp();
    }
    let nu = 0.5 * a * a;
    if nu > y {
        1.0 - lower_mixture(nu, y)
    } else {
        upper_mixture(nu, y)
    }
}

/// `1 - Q₁(a, b)`, the CDF of the Rician envelope, accurate when it is small.
pub fn marcum_q1_complement(a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if b == 0.0 {
        return 0.0;
    }
    let y = 0.5 * b * b;
    if a == 0.0 {
        return -(-y).exp_m1();
    }
    let nu = 0.5 * a * a;
    if nu > y {
        lower_mixture(nu, y)
    } else {
        1.0 - upper_mixture(nu, y)
    }
}

/// Poisson tail mass above `k` for mean `nu`, valid once `k + 2 > nu`.
fn poisson_tail_above(k: u64, nu: f64) -> f64 {
    let next = poisson_ln_pmf(k + 1, nu).exp();
    next / (1.0 - nu / (k + 2) as f64)
}

/// `Σ_k Pois(k; nu) · P(k+1, y)` for `nu > y`.
fn lower_mixture(nu: f64, y: f64) -> f64 {
    let mut sum = 0.0;
    let mut k = 0u64;
    loop {
        let lower = regularized_lower_gamma(k + 1, y).expect("positive order");
        sum += poisson_ln_pmf(k, nu).exp() * lower;
        // P(j+1, y) is decreasing in j, so the remainder is at most
        // P(k+1, y) times the Poisson mass above k.
        let mass = if (k + 2) as f64 > nu {
            poisson_tail_above(k, nu)
        } else {
            1.0
        };
        let bound = lower * mass;
        if bound < 1e-17 * sum || bound < 1e-300 {
            break;
        }
        k += 1;
    }
    sum
}

/// `Σ_k Pois(k; nu) · Q(k+1, y)` for `nu ≤ y`.
fn upper_mixture(nu: f64, y: f64) -> f64 {
    let mut upper = 0.0;
    let mut sum = 0.0;
    let mut k = 0u64;
    loop {
        upper = (upper + poisson_ln_pmf(k, y).exp()).min(1.0);
        let weight = poisson_ln_pmf(k, nu).exp();
        sum += weight * upper;
        // Q(j+1, y) ≤ 1, so the remainder is at most the Poisson tail mass.
        if (k + 2) as f64 > nu {
            let tail = poisson_tail_above(k, nu);
            if tail <= 1e-17 * sum || tail < 1e-300 {
                break;
            }
        }
        k += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_cases() {
        assert_eq!(marcum_q1(3.0, 0.0), 1.0);
        for &b in &[0.1, 1.0, 4.0] {
            assert!((marcum_q1(0.0, b) - (-0.5 * b * b).exp()).abs() < 1e-16);
        }
    }

    #[test]
    fn equal_arguments_closed_form() {
        // Q₁(a, a) = ½ (1 + e^{-a²} I₀(a²)); for a = 1, I₀(1) = 1.2660658777520082
        let expected = 0.5 * (1.0 + (-1.0f64).exp() * 1.266_065_877_752_008_2);
        assert!((marcum_q1(1.0, 1.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn large_arguments_stay_in_range() {
        let deep = marcum_q1(60.0, 5.0);
        assert!(deep <= 1.0 && deep > 1.0 - 1e-12);
        let tail = marcum_q1(5.0, 60.0);
        assert!((0.0..1e-200).contains(&tail));
    }

    #[test]
    fn complement_adds_to_one() {
        for &(a, b) in &[(0.0, 1.0), (1.0, 2.0), (3.0, 1.0), (7.0, 7.5), (20.0, 2.0)] {
            assert!((marcum_q1(a, b) + marcum_q1_complement(a, b) - 1.0).abs() < 1e-14);
        }
        // deep lower tail keeps relative accuracy
        let small = marcum_q1_complement(20.0, 2.0);
        assert!(small > 0.0 && small < 1e-60);
    }

    #[test]
    fn monotone_in_each_argument() {
        let mut prev = 0.0;
        for i in 0..40 {
            let v = marcum_q1(0.25 * i as f64, 2.0);
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = 1.0;
        for i in 0..40 {
            let v = marcum_q1(2.0, 0.25 * i as f64);
            assert!(v <= prev);
            prev = v;
        }
    }
}
