use super::series::{self, Kernel};
use super::{DecodingSet, MetricResult, Model};
use crate::channel::{LinkParams, SystemConfig};
use crate::specfn::{poisson_ln_pmf, regularized_lower_gamma, SeriesControl};
use crate::{Error, Result};

/// Probability that a relay decodes: its old source-link SNR clears `R_o`.
pub fn prob_relay_decodes(link: &LinkParams, threshold: f64) -> f64 {
    (-link.lambda * threshold).exp()
}

/// `Pr[D]`: members decode, non-members do not, independently.
pub fn prob_decoding_set(config: &SystemConfig, d: DecodingSet) -> Result<f64> {
    let model = Model::new(config)?;
    model.check_set(d)?;
    Ok(super::set_probability(&model.decode_probs(), d))
}

/// CDF of the current SNR `γ̂` at `x` given the old SNR `γ̂_o = gamma_old`:
/// `Σ_k Pois(k; c g/2) P(k+1, λx/(1-ρ_f²))`.
pub fn cdf_current_given_old(
    x: f64,
    gamma_old: f64,
    link: &LinkParams,
    ctrl: &SeriesControl,
) -> Result<f64> {
    if !(x >= 0.0) || !(gamma_old >= 0.0) {
        return Err(Error::arg("x", "SNR arguments must be nonnegative"));
    }
    if link.is_fresh() {
        return Ok(if gamma_old <= x { 1.0 } else { 0.0 });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let nu = link.half_c() * gamma_old;
    let y = link.current_rate() * x;
    let mut sum = 0.0;
    for k in 0..ctrl.k_max as u64 {
        let weight = poisson_ln_pmf(k, nu).exp();
        sum += weight * regularized_lower_gamma(k + 1, y)?;
        if (k + 2) as f64 > nu {
            // remaining Poisson mass, each term carrying a factor ≤ P(k+2, y)
            let next = poisson_ln_pmf(k + 1, nu).exp();
            let tail = next / (1.0 - nu / (k + 2) as f64) * regularized_lower_gamma(k + 2, y)?;
            if tail < ctrl.abs_tol {
                return Ok(sum);
            }
        }
    }
    Err(Error::SeriesDiverged {
        series: "conditional-cdf",
        k_max: ctrl.k_max,
        tail: f64::NAN,
    })
}

/// CDF at `x` of the largest old relay SNR among `D` without `excluded`.
pub fn cdf_max_others(x: f64, d: DecodingSet, excluded: usize, links: &[LinkParams]) -> f64 {
    d.without(excluded)
        .iter()
        .map(|i| -(-links[i].lambda * x).exp_m1())
        .product()
}

/// `Pr[relay m is selected and its current SNR is below R_o | D]`.
pub fn outage_conditional(
    d: DecodingSet,
    m: usize,
    config: &SystemConfig,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let model = Model::new(config)?;
    model.outage_conditional(d, m, ctrl)
}

/// End-to-end outage probability. Uses the identical-link formula when every
/// link shares parameters and the general decoding-set sum otherwise.
pub fn outage_total(config: &SystemConfig, ctrl: &SeriesControl) -> Result<MetricResult> {
    let model = Model::new(config)?;
    model.outage(ctrl)
}

/// Decoding-set sum, regardless of symmetry.
pub fn outage_total_general(config: &SystemConfig, ctrl: &SeriesControl) -> Result<MetricResult> {
    Model::new(config)?.outage_general(ctrl)
}

/// Identical-link formula; rejects asymmetric configurations.
pub fn outage_total_symmetric(config: &SystemConfig, ctrl: &SeriesControl) -> Result<MetricResult> {
    Model::new(config)?.outage_symmetric(ctrl)
}

impl Model {
    fn outage_kernel(&self) -> Kernel {
        Kernel::Outage {
            threshold: self.threshold,
        }
    }

    pub fn outage_conditional(&self, d: DecodingSet, m: usize, ctrl: &SeriesControl) -> Result<f64> {
        series::conditional_value(self, d, m, self.outage_kernel(), ctrl)
    }

    pub fn outage(&self, ctrl: &SeriesControl) -> Result<MetricResult> {
        if self.is_symmetric() {
            self.outage_symmetric(ctrl)
        } else {
            self.outage_general(ctrl)
        }
    }

    pub fn outage_general(&self, ctrl: &SeriesControl) -> Result<MetricResult> {
        let terms = series::candidate_terms(self, self.outage_kernel(), ctrl)?;
        let (value, condition_estimate) = series::assemble_general(&terms, &self.decode_probs(), 1.0);
        Ok(MetricResult {
            value,
            series_terms_used: terms.iter().map(|t| t.terms).max().unwrap_or(0),
            condition_estimate,
            oracle_value: None,
        })
    }

    pub fn outage_symmetric(&self, ctrl: &SeriesControl) -> Result<MetricResult> {
        if !self.is_symmetric() {
            return Err(Error::arg("config", "links are not identically distributed"));
        }
        let (values, terms) =
            series::symmetric_terms(&self.relay[0], self.relays(), self.outage_kernel(), ctrl)?;
        let p = prob_relay_decodes(&self.source[0], self.threshold);
        let (value, condition_estimate) = series::assemble_symmetric(&values, p, 1.0)?;
        Ok(MetricResult {
            value,
            series_terms_used: terms,
            condition_estimate,
            oracle_value: None,
        })
    }
}
