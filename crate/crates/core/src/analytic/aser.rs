use serde::{Deserialize, Serialize};

use super::series::{self, Kernel};
use super::{DecodingSet, MetricResult, Model};
use crate::channel::{LambdaConvention, LinkParams, SystemConfig};
use crate::specfn::SeriesControl;
use crate::{Error, Result};

/// How the Gaussian Q function inside the error-rate average is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AserMethod {
    /// Exact Q; the gamma moments have a two-term recurrence.
    Exact,
    /// Exponential-polynomial approximation of order `n_a`.
    QApprox { n_a: u32 },
}

impl AserMethod {
    pub const DEFAULT_ORDER: u32 = 20;

    /// Approximate Q for the reference-curve convention, exact Q otherwise.
    pub fn for_convention(convention: LambdaConvention) -> Self {
        match convention {
            LambdaConvention::Paper => AserMethod::QApprox {
                n_a: Self::DEFAULT_ORDER,
            },
            LambdaConvention::Derived => AserMethod::Exact,
        }
    }
}

/// Average error probability of the source→relay hop,
/// `B = α/2 (1 - √(βP/(βP + 2λ)))`.
pub fn relay_error_prob(link: &LinkParams, config: &SystemConfig) -> f64 {
    error_prob_exponential(config.alpha, config.beta * config.power, link.lambda)
}

/// `E[α Q(√(βP γ))]` for `γ ~ Exp(λ)`, written without cancellation.
pub(crate) fn error_prob_exponential(alpha: f64, beta_p: f64, lambda: f64) -> f64 {
    let r = (beta_p / (beta_p + 2.0 * lambda)).sqrt();
    alpha * lambda / ((beta_p + 2.0 * lambda) * (1.0 + r))
}

/// Average symbol error rate of the selection scheme.
pub fn aser_total(
    config: &SystemConfig,
    ctrl: &SeriesControl,
    method: AserMethod,
) -> Result<MetricResult> {
    Model::new(config)?.aser(ctrl, method)
}

pub fn aser_total_general(
    config: &SystemConfig,
    ctrl: &SeriesControl,
    method: AserMethod,
) -> Result<MetricResult> {
    Model::new(config)?.aser_general(ctrl, method)
}

pub fn aser_total_symmetric(
    config: &SystemConfig,
    ctrl: &SeriesControl,
    method: AserMethod,
) -> Result<MetricResult> {
    Model::new(config)?.aser_symmetric(ctrl, method)
}

/// `E[α Q(√(βP γ̂_{md})); m selected | D]`.
pub fn aser_conditional(
    d: DecodingSet,
    m: usize,
    config: &SystemConfig,
    ctrl: &SeriesControl,
    method: AserMethod,
) -> Result<f64> {
    Model::new(config)?.aser_conditional(d, m, ctrl, method)
}

/// Density at `x` of the selected relay's current SNR given `D`.
pub fn aser_conditional_pdf(
    x: f64,
    d: DecodingSet,
    config: &SystemConfig,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let model = Model::new(config)?;
    if d.is_empty() {
        return Err(Error::arg("D", "no relay to select from an empty decoding set"));
    }
    d.iter()
        .map(|m| model.pdf_term(x, d, m, ctrl))
        .sum()
}

/// The part of [`aser_conditional_pdf`] on the event that relay `m` is selected.
pub fn aser_conditional_pdf_term(
    x: f64,
    d: DecodingSet,
    m: usize,
    config: &SystemConfig,
    ctrl: &SeriesControl,
) -> Result<f64> {
    Model::new(config)?.pdf_term(x, d, m, ctrl)
}

impl Model {
    fn aser_kernel(&self, method: AserMethod) -> Result<Kernel> {
        let beta_p = self.beta * self.power;
        match method {
            AserMethod::Exact => Ok(Kernel::AserExact {
                alpha: self.alpha,
                beta_p,
            }),
            AserMethod::QApprox { n_a } if n_a >= 1 => Ok(Kernel::AserApprox {
                alpha: self.alpha,
                beta_p,
                n_a,
            }),
            AserMethod::QApprox { .. } => Err(Error::arg("n_a", "approximation order must be at least 1")),
        }
    }

    /// Per-relay probability of joining `D`, `1 - B_i`, plus the all-fail term `½ Π B_i`.
    fn aser_weights(&self) -> (Vec<f64>, f64) {
        let beta_p = self.beta * self.power;
        let b: Vec<f64> = self
            .source
            .iter()
            .map(|l| error_prob_exponential(self.alpha, beta_p, l.lambda))
            .collect();
        (b.iter().map(|bi| 1.0 - bi).collect(), b.iter().product::<f64>())
    }

    pub fn aser_conditional(
        &self,
        d: DecodingSet,
        m: usize,
        ctrl: &SeriesControl,
        method: AserMethod,
    ) -> Result<f64> {
        series::conditional_value(self, d, m, self.aser_kernel(method)?, ctrl)
    }

    pub fn aser(&self, ctrl: &SeriesControl, method: AserMethod) -> Result<MetricResult> {
        if self.is_symmetric() {
            self.aser_symmetric(ctrl, method)
        } else {
            self.aser_general(ctrl, method)
        }
    }

    pub fn aser_general(&self, ctrl: &SeriesControl, method: AserMethod) -> Result<MetricResult> {
        let terms = series::candidate_terms(self, self.aser_kernel(method)?, ctrl)?;
        let (joins, _) = self.aser_weights();
        // Pr[∅] = Π B_i, so an empty-set value of ½ gives the ½ Π B_i term.
        let (value, condition_estimate) = series::assemble_general(&terms, &joins, 0.5);
        Ok(MetricResult {
            value,
            series_terms_used: terms.iter().map(|t| t.terms).max().unwrap_or(0),
            condition_estimate,
            oracle_value: None,
        })
    }

    pub fn aser_symmetric(&self, ctrl: &SeriesControl, method: AserMethod) -> Result<MetricResult> {
        if !self.is_symmetric() {
            return Err(Error::arg("config", "links are not identically distributed"));
        }
        let kernel = self.aser_kernel(method)?;
        let (values, terms) = series::symmetric_terms(&self.relay[0], self.relays(), kernel, ctrl)?;
        let (joins, _) = self.aser_weights();
        let (value, condition_estimate) = series::assemble_symmetric(&values, joins[0], 0.5)?;
        Ok(MetricResult {
            value,
            series_terms_used: terms,
            condition_estimate,
            oracle_value: None,
        })
    }

    pub(crate) fn pdf_term(&self, x: f64, d: DecodingSet, m: usize, ctrl: &SeriesControl) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::arg("x", format!("must be nonnegative, got {x}")));
        }
        series::conditional_value(self, d, m, Kernel::Density { x }, ctrl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::FadingParams;

    #[test]
    fn relay_error_examples() {
        let cfg = SystemConfig::symmetric(1, 10.0, FadingParams::new(1.0, 1.0, 1.0).unwrap());
        let l = cfg.source_params()[0];
        let b = relay_error_prob(&l, &cfg);
        assert!((b - 0.5 * (1.0 - (20.0f64 / 22.0).sqrt())).abs() < 1e-15);
        assert!((b - 0.023_268_7).abs() < 1e-7);
        let low = relay_error_prob(&l, &cfg.with_power(0.5));
        assert!((low - 0.211_324_865_405_187_1).abs() < 1e-14);
        assert!(relay_error_prob(&l, &cfg.with_power(1e12)) < 1e-12);
    }

    #[test]
    fn fresh_single_relay_density_is_exponential() {
        let cfg = SystemConfig::symmetric(1, 10.0, FadingParams::new(1.0, 1.0, 1.0).unwrap());
        let d = DecodingSet::full(1);
        let ctrl = SeriesControl::default();
        for &x in &[0.0, 0.5, 2.0] {
            let v = aser_conditional_pdf(x, d, &cfg, &ctrl).unwrap();
            assert!((v - (-x).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_zero_order() {
        let cfg = SystemConfig::symmetric(2, 10.0, FadingParams::new(1.0, 1.0, 0.9).unwrap());
        let r = aser_total(&cfg, &SeriesControl::default(), AserMethod::QApprox { n_a: 0 });
        assert!(r.is_err());
    }
}
