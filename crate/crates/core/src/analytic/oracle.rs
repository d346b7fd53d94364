//! Quadrature evaluations of the same quantities as the series, built only
//! from the Marcum-Q form of the conditional CDF and direct integration over
//! the old SNR. Slow, and independent of the series engine.

use std::f64::consts::{LN_2, PI};

use super::{cdf_max_others, DecodingSet, Model};
use crate::channel::{LinkParams, SystemConfig};
use crate::quadrature::{integrate, integrate_piecewise, integrate_to_infinity, QuadOptions};
use crate::specfn::{gaussian_q, marcum_q1, marcum_q1_complement};
use crate::Result;

const INNER: QuadOptions = QuadOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-10,
    max_intervals: 2000,
};
const OUTER: QuadOptions = QuadOptions {
    abs_tol: 1e-12,
    rel_tol: 1e-10,
    max_intervals: 2000,
};

/// Quantity averaged over the selected relay's current SNR.
#[derive(Debug, Clone, Copy)]
enum Target {
    Outage(f64),
    Aser { alpha: f64, beta_p: f64 },
    Capacity(f64),
}

impl Target {
    fn at(self, x: f64) -> f64 {
        match self {
            Target::Outage(r) => {
                if x < r {
                    1.0
                } else {
                    0.0
                }
            }
            Target::Aser { alpha, beta_p } => alpha * gaussian_q((beta_p * x).sqrt()),
            Target::Capacity(p) => 0.5 * (p * x).ln_1p() / LN_2,
        }
    }

    /// `E[h(X) | γ̂_o = g]` through the Marcum-Q conditional law.
    fn conditional(self, link: &LinkParams, g: f64) -> Result<f64> {
        if link.is_fresh() {
            return Ok(self.at(g));
        }
        let a = link.current_rate();
        let nc = (link.c * g).sqrt();
        let cdf = move |x: f64| marcum_q1_complement(nc, (2.0 * a * x).sqrt());
        match self {
            Target::Outage(r) => Ok(cdf(r)),
            Target::Aser { alpha, beta_p } => {
                // E[h] = ∫ -h'(x) F(x) dx with x = u²
                let scale = alpha * beta_p.sqrt() / (2.0 * PI).sqrt();
                let r = integrate_to_infinity(
                    |u| {
                        let e = (-0.5 * beta_p * u * u).exp();
                        if e == 0.0 {
                            0.0
                        } else {
                            scale * e * cdf(u * u)
                        }
                    },
                    0.0,
                    INNER,
                )?;
                Ok(r.value)
            }
            Target::Capacity(p) => {
                // E[h] = ∫ h'(x) (1 - F(x)) dx, and 1 - F vanishes past the bulk
                let center = link.c * g / (2.0 * a);
                let x_max = (nc + 12.0).powi(2) / (2.0 * a);
                let mut breaks = vec![0.0];
                if center > 0.0 && center < x_max {
                    breaks.push(center);
                }
                breaks.push(x_max);
                let r = integrate_piecewise(
                    |x| {
                        let tail = marcum_q1(nc, (2.0 * a * x).sqrt());
                        0.5 * p / (LN_2 * (1.0 + p * x)) * tail
                    },
                    &breaks,
                    INNER,
                )?;
                Ok(r.value)
            }
        }
    }
}

fn selected_expectation(model: &Model, d: DecodingSet, m: usize, target: Target) -> Result<f64> {
    model.check_set(d)?;
    d.check_member(m)?;
    let link = &model.relay[m];
    let lambda = link.lambda;
    let integrand = |g: f64| -> f64 {
        let weight = lambda * (-lambda * g).exp() * cdf_max_others(g, d, m, &model.relay);
        if weight == 0.0 {
            return 0.0;
        }
        let v = target.conditional(link, g).unwrap_or(f64::NAN);
        weight * v
    };
    let mut breaks: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
        .iter()
        .map(|t| t / lambda)
        .collect();
    if link.is_fresh() {
        if let Target::Outage(r) = target {
            breaks.push(r);
            breaks.sort_by(f64::total_cmp);
        }
    }
    let r = integrate_piecewise(integrand, &breaks, OUTER)?;
    if r.value.is_nan() {
        // an inner integral failed; rerun it to surface the error
        target.conditional(link, 1.0 / lambda)?;
    }
    Ok(r.value)
}

/// Conditional outage term by direct integration over the old SNR.
pub fn outage_conditional_quadrature(d: DecodingSet, m: usize, config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    selected_expectation(&model, d, m, Target::Outage(model.threshold))
}

/// `E[α Q(√(βP γ̂)); m selected | D]` with exact Q.
pub fn aser_conditional_quadrature(d: DecodingSet, m: usize, config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    let target = Target::Aser {
        alpha: model.alpha,
        beta_p: model.beta * model.power,
    };
    selected_expectation(&model, d, m, target)
}

/// `E[½ log₂(1 + P γ̂); m selected | D]`.
pub fn capacity_conditional_quadrature(d: DecodingSet, m: usize, config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    selected_expectation(&model, d, m, Target::Capacity(model.power))
}

fn total(model: &Model, target: Target, joins: &[f64], empty: f64) -> Result<f64> {
    let mut sum = 0.0;
    for d in DecodingSet::all(model.relays()) {
        let pr = super::set_probability(joins, d);
        if d.is_empty() {
            sum += pr * empty;
            continue;
        }
        for m in d.iter() {
            sum += pr * selected_expectation(model, d, m, target)?;
        }
    }
    Ok(sum)
}

pub fn outage_total_quadrature(config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    total(&model, Target::Outage(model.threshold), &model.decode_probs(), 1.0)
}

/// Exact-Q error rate.
pub fn aser_total_quadrature(config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    let beta_p = model.beta * model.power;
    let joins: Vec<f64> = model
        .source
        .iter()
        .map(|l| 1.0 - relay_error_prob_quadrature(l, config).unwrap_or(f64::NAN))
        .collect();
    let target = Target::Aser {
        alpha: model.alpha,
        beta_p,
    };
    total(&model, target, &joins, 0.5)
}

pub fn capacity_total_quadrature(config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    total(&model, Target::Capacity(model.power), &model.decode_probs(), 0.0)
}

/// `∫ α Q(√(βP γ)) λ e^{-λγ} dγ`.
pub fn relay_error_prob_quadrature(link: &LinkParams, config: &SystemConfig) -> Result<f64> {
    let beta_p = config.beta * config.power;
    let lambda = link.lambda;
    let breaks: Vec<f64> = [0.0, 0.01, 0.1, 1.0, 10.0, 50.0].iter().map(|t| t / lambda).collect();
    let head = integrate_piecewise(
        |g| config.alpha * gaussian_q((beta_p * g).sqrt()) * lambda * (-lambda * g).exp(),
        &breaks,
        OUTER,
    )?;
    let rest = integrate_to_infinity(
        |g| config.alpha * gaussian_q((beta_p * g).sqrt()) * lambda * (-lambda * g).exp(),
        50.0 / lambda,
        OUTER,
    )?;
    Ok(head.value + rest.value)
}

/// Normalization of the conditional density, `∫₀^∞ pdf`.
pub fn pdf_mass(d: DecodingSet, config: &SystemConfig) -> Result<f64> {
    let model = Model::new(config)?;
    let ctrl = crate::specfn::SeriesControl::default();
    let lambda_min = d
        .iter()
        .map(|i| model.relay[i].lambda)
        .fold(f64::INFINITY, f64::min);
    let pdf = |x: f64| -> f64 {
        d.iter()
            .map(|m| model.pdf_term(x, d, m, &ctrl).unwrap_or(f64::NAN))
            .sum()
    };
    let head = integrate(pdf, 0.0, 40.0 / lambda_min, OUTER)?;
    let rest = integrate_to_infinity(pdf, 40.0 / lambda_min, OUTER)?;
    Ok(head.value + rest.value)
}
