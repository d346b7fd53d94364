use super::series::{self, Kernel};
use super::{DecodingSet, MetricResult, Model};
use crate::channel::SystemConfig;
use crate::specfn::{factorial, scaled_e1, SeriesControl};
use crate::{Error, Result};

/// Average of the capacity lower bound `½ log₂(1 + P γ̂)` of the selected path,
/// zero when no relay decodes.
pub fn capacity_lb_avg(config: &SystemConfig, ctrl: &SeriesControl) -> Result<MetricResult> {
    Model::new(config)?.capacity(ctrl)
}

pub fn capacity_total_general(config: &SystemConfig, ctrl: &SeriesControl) -> Result<MetricResult> {
    Model::new(config)?.capacity_general(ctrl)
}

pub fn capacity_total_symmetric(config: &SystemConfig, ctrl: &SeriesControl) -> Result<MetricResult> {
    Model::new(config)?.capacity_symmetric(ctrl)
}

/// `E[½ log₂(1 + P γ̂_{md}); m selected | D]`.
pub fn capacity_conditional(
    d: DecodingSet,
    m: usize,
    config: &SystemConfig,
    ctrl: &SeriesControl,
) -> Result<f64> {
    Model::new(config)?.capacity_conditional(d, m, ctrl)
}

/// `∫₀^∞ ln(1 + a x) xᵏ e^{-x} dx` through its finite exponential-integral expansion
///
/// ```text
/// Σ_{μ=0}^{k} k!/(k-μ)! [ (-1)^{n-1} e^{1/a} a^{-n} Ei(-1/a) + Σ_{t=1}^{n} (t-1)! (-1/a)^{n-t} ],  n = k-μ,
/// ```
///
/// with the standard `Ei(-z) = -E1(z)`. The alternating terms cancel heavily
/// once `k` exceeds a few multiples of `1/a`; the metric itself goes through a
/// stable recurrence instead and this form is kept for cross-checks.
pub fn log_integral_identity(a: f64, k: u32) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::arg("a", format!("must be positive, got {a}")));
    }
    let z = 1.0 / a;
    // e^{1/a} Ei(-1/a)
    let scaled_ei = -scaled_e1(z)?;
    let kfact = factorial(k as u64);
    let mut total = 0.0;
    for mu in 0..=k {
        let n = k - mu;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 }; // (-1)^{n-1}
        let mut bracket = sign * scaled_ei * z.powi(n as i32);
        for t in 1..=n {
            bracket += factorial(t as u64 - 1) * (-z).powi((n - t) as i32);
        }
        total += kfact / factorial(n as u64) * bracket;
    }
    Ok(total)
}

impl Model {
    fn capacity_kernel(&self) -> Kernel {
        Kernel::Capacity { power: self.power }
    }

    pub fn capacity_conditional(&self, d: DecodingSet, m: usize, ctrl: &SeriesControl) -> Result<f64> {
        series::conditional_value(self, d, m, self.capacity_kernel(), ctrl)
    }

    pub fn capacity(&self, ctrl: &SeriesControl) -> Result<MetricResult> {
        if self.is_symmetric() {
            self.capacity_symmetric(ctrl)
        } else {
            self.capacity_general(ctrl)
        }
    }

    pub fn capacity_general(&self, ctrl: &SeriesControl) -> Result<MetricResult> {
        let terms = series::candidate_terms(self, self.capacity_kernel(), ctrl)?;
        let (value, condition_estimate) = series::assemble_general(&terms, &self.decode_probs(), 0.0);
        Ok(MetricResult {
            value,
            series_terms_used: terms.iter().map(|t| t.terms).max().unwrap_or(0),
            condition_estimate,
            oracle_value: None,
        })
    }

    pub fn capacity_symmetric(&self, ctrl: &SeriesControl) -> Result<MetricResult> {
        if !self.is_symmetric() {
            return Err(Error::arg("config", "links are not identically distributed"));
        }
        let (values, terms) =
            series::symmetric_terms(&self.relay[0], self.relays(), self.capacity_kernel(), ctrl)?;
        let p = super::prob_relay_decodes(&self.source[0], self.threshold);
        let (value, condition_estimate) = series::assemble_symmetric(&values, p, 0.0)?;
        Ok(MetricResult {
            value,
            series_terms_used: terms,
            condition_estimate,
            oracle_value: None,
        })
    }
}
