//! The series engine shared by all metrics.
//!
//! For candidate `m` and a subset `S` of the other candidates, with
//! `L = λ_m + Σ_{i∈S} λ_i`, `a = λ_m/(1-ρ_f²)` and `c/2 = ρ_f² a`,
//!
//! ```text
//! V_m(S) = Σ_k q wᵏ h_k,   q = λ_m/(L + c/2),   w = (c/2)/(L + c/2),
//! ```
//!
//! where `h_k = E[h(X)]` for `X ~ Gamma(k+1, a)`. The conditional expectation
//! for decoding set `D` is `Σ_{S ⊆ D\{m}} (-1)^{|S|} V_m(S)`.
//!
//! Truncation happens once `q w^{k+1}` times a bound on the remaining
//! moments drops below the absolute tolerance. The moments depend on `m`
//! only through `a`, so one table per relay serves every subset.

use rayon::prelude::*;

use super::{DecodingSet, Model};
use crate::channel::LinkParams;
use crate::specfn::{
    gaussian_q_approx, ln_gamma, poisson_ln_pmf, q_approx_coefficient, regularized_lower_gamma,
    scaled_e1, SeriesControl,
};
use crate::{Error, Result};

/// The function `h` averaged over the selected relay's current SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    /// `1{x < threshold}`.
    Outage { threshold: f64 },
    /// Point evaluation of the density at `x`.
    Density { x: f64 },
    /// `α Q(√(βP x))`.
    AserExact { alpha: f64, beta_p: f64 },
    /// `α Q̃(√(βP x))` with the exponential-polynomial approximation of order `n_a`.
    AserApprox { alpha: f64, beta_p: f64, n_a: u32 },
    /// `½ log₂(1 + P x)`.
    Capacity { power: f64 },
}

impl Kernel {
    fn moments(self, rate: f64) -> Box<dyn MomentSeq> {
        match self {
            Kernel::Outage { threshold } => Box::new(OutageMoments {
                x: rate * threshold,
                cache: Vec::new(),
            }),
            Kernel::Density { x } => Box::new(DensityMoments {
                rate,
                ax: rate * x,
            }),
            Kernel::AserExact { alpha, beta_p } => Box::new(AserExactMoments::new(alpha, beta_p, rate)),
            Kernel::AserApprox { alpha, beta_p, n_a } => {
                Box::new(AserApproxMoments::new(alpha, beta_p, n_a, rate))
            }
            Kernel::Capacity { power } => Box::new(CapacityMoments::new(power, rate)),
        }
    }
}

/// Gamma moments `h_k` of a kernel at a fixed rate.
pub(crate) trait MomentSeq: Send {
    fn value(&mut self, k: usize) -> f64;
    /// Upper bound on `Σ_{j≥k} w^{j-k} |h_j|`.
    fn tail(&mut self, k: usize, w: f64) -> f64;
}

struct OutageMoments {
    x: f64,
    cache: Vec<f64>,
}

impl MomentSeq for OutageMoments {
    fn value(&mut self, k: usize) -> f64 {
        while self.cache.len() <= k {
            let s = self.cache.len() as u64 + 1;
            let v = regularized_lower_gamma(s, self.x).expect("positive order, finite x");
            self.cache.push(v);
        }
        self.cache[k]
    }

    fn tail(&mut self, k: usize, w: f64) -> f64 {
        // P(k+1, x) is decreasing in k
        self.value(k) / (1.0 - w)
    }
}

struct DensityMoments {
    rate: f64,
    ax: f64,
}

impl MomentSeq for DensityMoments {
    fn value(&mut self, k: usize) -> f64 {
        self.rate * poisson_ln_pmf(k as u64, self.ax).exp()
    }

    fn tail(&mut self, k: usize, w: f64) -> f64 {
        if (k as f64) < self.ax {
            return f64::INFINITY;
        }
        self.value(k) / (1.0 - w)
    }
}

/// `E_k = E[Q(√(βP X))]`, `X ~ Gamma(k+1, a)`, as `½ - Σ_{j≤k} d_j` with
/// `d_0 = ½√(σ/(σ+2))`, `d_j = d_{j-1} (j-½)/(j(1+σ/2))`, `σ = βP/a`.
struct AserExactMoments {
    alpha: f64,
    sigma: f64,
    ratio: f64,
    d: Vec<f64>,
    cache: Vec<f64>,
}

impl AserExactMoments {
    fn new(alpha: f64, beta_p: f64, rate: f64) -> Self {
        let sigma = beta_p / rate;
        Self {
            alpha,
            sigma,
            ratio: 1.0 / (1.0 + 0.5 * sigma),
            d: vec![0.5 * (sigma / (sigma + 2.0)).sqrt()],
            cache: Vec::new(),
        }
    }

    fn d(&mut self, j: usize) -> f64 {
        while self.d.len() <= j {
            let i = self.d.len();
            let prev = self.d[i - 1];
            self.d.push(prev * (i as f64 - 0.5) / i as f64 * self.ratio);
        }
        self.d[j]
    }

    fn compute(&mut self, k: usize) -> f64 {
        if self.ratio <= 0.5 {
            // Terms shrink at least geometrically, so sum the tail directly
            // instead of subtracting nearly equal numbers.
            let mut sum = 0.0;
            let mut j = k + 1;
            loop {
                let t = self.d(j);
                sum += t;
                if t <= 1e-17 * sum || t == 0.0 {
                    break;
                }
                j += 1;
            }
            return sum;
        }
        if k == 0 {
            let r = 2.0 * self.d[0];
            return 1.0 / ((self.sigma + 2.0) * (1.0 + r));
        }
        (self.cache[k - 1] - self.d(k)).max(0.0)
    }
}

impl MomentSeq for AserExactMoments {
    fn value(&mut self, k: usize) -> f64 {
        while self.cache.len() <= k {
            let i = self.cache.len();
            let e = self.compute(i);
            self.cache.push(e);
        }
        self.alpha * self.cache[k]
    }

    fn tail(&mut self, k: usize, w: f64) -> f64 {
        self.value(k) / (1.0 - w)
    }
}

/// `α Σ_n a_n (βP)^{(n-1)/2} aᵏ⁺¹ Γ(k+(n+1)/2) / (k! (a+βP/2)^{k+(n+1)/2})`.
struct AserApproxMoments {
    alpha: f64,
    ln_ratio: f64,
    ln_power_ratio: f64,
    coefficients: Vec<(f64, f64)>,
    sup: f64,
}

impl AserApproxMoments {
    fn new(alpha: f64, beta_p: f64, n_a: u32, rate: f64) -> Self {
        let denom = rate + 0.5 * beta_p;
        let coefficients = (1..=n_a)
            .map(|n| {
                let a_n = q_approx_coefficient(n);
                (a_n.signum(), a_n.abs().ln())
            })
            .collect();
        Self {
            alpha,
            ln_ratio: (rate / denom).ln(),
            ln_power_ratio: (beta_p / denom).ln(),
            coefficients,
            sup: q_approx_sup(n_a),
        }
    }
}

/// `sup_{y≥0} |Q̃(y)|` on a fine grid, padded by one percent.
fn q_approx_sup(n_a: u32) -> f64 {
    let mut sup = 0.0f64;
    for i in 0..=4000 {
        let y = i as f64 * 0.01;
        let v = gaussian_q_approx(y, n_a).expect("valid order and argument");
        sup = sup.max(v.abs());
    }
    1.01 * sup
}

impl MomentSeq for AserApproxMoments {
    fn value(&mut self, k: usize) -> f64 {
        let kf = k as f64;
        let ln_kfact = ln_gamma(kf + 1.0);
        let mut sum = 0.0;
        for (idx, &(sign, ln_abs)) in self.coefficients.iter().enumerate() {
            let half = 0.5 * idx as f64; // (n-1)/2
            let ln_term = ln_abs
                + (kf + 1.0) * self.ln_ratio
                + half * self.ln_power_ratio
                + ln_gamma(kf + 1.0 + half)
                - ln_kfact;
            sum += sign * ln_term.exp();
        }
        self.alpha * sum
    }

    fn tail(&mut self, _k: usize, w: f64) -> f64 {
        self.alpha * self.sup / (1.0 - w)
    }
}

/// `G_k = E[ln(1 + s Y)]`, `Y ~ Gamma(k+1, 1)`, `s = P/a`, built from
/// `H_j = ∫₀^∞ e^{-bu} (1+u)^{-(j+1)} du = e^b E_{j+1}(b)`, `b = 1/s`, via
/// `G_k = Σ_{j≤k} H_j`. `H_j = (1 - b H_{j-1})/j` is stable upward only for
/// `j > b`; below that each `H_j` comes from its continued fraction.
struct CapacityMoments {
    b: f64,
    s: f64,
    h: Vec<f64>,
    g: Vec<f64>,
}

const CAPACITY_SCALE: f64 = 0.5 / std::f64::consts::LN_2;

impl CapacityMoments {
    fn new(power: f64, rate: f64) -> Self {
        Self {
            b: rate / power,
            s: power / rate,
            h: Vec::new(),
            g: Vec::new(),
        }
    }

    fn next_h(&self, j: usize) -> f64 {
        if j == 0 {
            return scaled_e1(self.b).expect("b > 0");
        }
        if (j as f64) > self.b {
            (1.0 - self.b * self.h[j - 1]) / j as f64
        } else {
            scaled_en(j as u64 + 1, self.b)
        }
    }
}

/// `e^x E_n(x)` for `x > 1`, `n ≥ 1`, by modified Lentz.
pub(crate) fn scaled_en(n: u64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let nf = n as f64;
    let mut b = x + nf;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000u64 {
        let an = -((i as f64) * (nf - 1.0 + i as f64));
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

impl MomentSeq for CapacityMoments {
    fn value(&mut self, k: usize) -> f64 {
        while self.g.len() <= k {
            let j = self.h.len();
            let hj = self.next_h(j);
            self.h.push(hj);
            let prev = if j == 0 { 0.0 } else { self.g[j - 1] };
            self.g.push(prev + hj);
        }
        CAPACITY_SCALE * self.g[k]
    }

    fn tail(&mut self, k: usize, w: f64) -> f64 {
        // G_j ≤ ln(1 + s(j+1)) ≤ ln(1 + s(k+1)) + (j - k)
        let lead = (self.s * (k as f64 + 1.0)).ln_1p();
        let one_minus = 1.0 - w;
        CAPACITY_SCALE * (lead / one_minus + w / (one_minus * one_minus))
    }
}

/// Sum a single series `Σ_k q wᵏ h_k`.
fn sum_series(moments: &mut dyn MomentSeq, q: f64, w: f64, ctrl: &SeriesControl) -> Result<(f64, usize)> {
    let mut sum = 0.0;
    let mut weight = q;
    let mut tail = f64::INFINITY;
    for k in 0..ctrl.k_max {
        sum += weight * moments.value(k);
        weight *= w;
        if weight == 0.0 {
            return Ok((sum, k + 1));
        }
        tail = weight * moments.tail(k + 1, w);
        if tail < ctrl.abs_tol {
            return Ok((sum, k + 1));
        }
    }
    Err(Error::SeriesDiverged {
        series: "gamma-moment",
        k_max: ctrl.k_max,
        tail,
    })
}

/// Series values `V_m(S)` for one candidate.
#[derive(Debug, Clone)]
pub(crate) struct CandidateTerms {
    m: usize,
    /// Indexed by the full relay mask of `S`; entries with bit `m` set are unused.
    values: Vec<f64>,
    pub terms: usize,
}

impl CandidateTerms {
    /// `E[h; m selected | D]` and the absolute sum of its expansion.
    pub fn conditional(&self, d: DecodingSet) -> (f64, f64) {
        let others = d.without(self.m).bits();
        let mut sum = 0.0;
        let mut abs = 0.0;
        let mut s = others;
        loop {
            let v = self.values[s as usize];
            if s.count_ones().is_multiple_of(2) {
                sum += v;
            } else {
                sum -= v;
            }
            abs += v.abs();
            if s == 0 {
                break;
            }
            s = (s - 1) & others;
        }
        (sum, abs)
    }
}

/// `V(L)` for candidate link `link` and total rate `big_l`.
pub(crate) fn subset_value(
    link: &LinkParams,
    big_l: f64,
    kernel: Kernel,
    ctrl: &SeriesControl,
    table: &mut Option<Box<dyn MomentSeq>>,
) -> Result<(f64, usize)> {
    let lambda = link.lambda;
    if link.is_fresh() {
        // Current equals old: V = (λ_m/L) E[h(X)], X ~ Exp(L).
        let mut m = kernel.moments(big_l);
        return Ok((lambda / big_l * m.value(0), 1));
    }
    let half_c = link.half_c();
    let denom = big_l + half_c;
    let q = lambda / denom;
    let w = half_c / denom;
    let tab = table.get_or_insert_with(|| kernel.moments(link.current_rate()));
    sum_series(tab.as_mut(), q, w, ctrl)
}

/// `E[h; m selected | D]` for a single candidate.
pub(crate) fn conditional_value(
    model: &Model,
    d: DecodingSet,
    m: usize,
    kernel: Kernel,
    ctrl: &SeriesControl,
) -> Result<f64> {
    model.check_set(d)?;
    d.check_member(m)?;
    let link = &model.relay[m];
    let others = d.without(m).bits();
    let mut table = None;
    let mut sum = 0.0;
    let mut s = others;
    loop {
        let big_l = link.lambda
            + DecodingSet::from_bits(s)
                .iter()
                .map(|i| model.relay[i].lambda)
                .sum::<f64>();
        let (v, _) = subset_value(link, big_l, kernel, ctrl, &mut table)?;
        if s.count_ones().is_multiple_of(2) {
            sum += v;
        } else {
            sum -= v;
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & others;
    }
    Ok(sum)
}

/// Series values for every candidate and every subset of the other relays.
pub(crate) fn candidate_terms(
    model: &Model,
    kernel: Kernel,
    ctrl: &SeriesControl,
) -> Result<Vec<CandidateTerms>> {
    let relays = model.relays();
    (0..relays)
        .into_par_iter()
        .map(|m| {
            let link = &model.relay[m];
            let mut table = None;
            let mut values = vec![0.0; 1 << relays];
            let mut terms = 0;
            for mask in 0..(1u32 << relays) {
                if mask & (1 << m) != 0 {
                    continue;
                }
                let big_l = link.lambda
                    + DecodingSet::from_bits(mask)
                        .iter()
                        .map(|i| model.relay[i].lambda)
                        .sum::<f64>();
                let (v, n) = subset_value(link, big_l, kernel, ctrl, &mut table)?;
                values[mask as usize] = v;
                terms = terms.max(n);
            }
            Ok(CandidateTerms { m, values, terms })
        })
        .collect()
}

/// Series values `V((j+1)λ)` for `j = 0..relays` under identical links.
pub(crate) fn symmetric_terms(
    link: &LinkParams,
    relays: usize,
    kernel: Kernel,
    ctrl: &SeriesControl,
) -> Result<(Vec<f64>, usize)> {
    let mut table = None;
    let mut out = Vec::with_capacity(relays);
    let mut terms = 0;
    for j in 0..relays {
        let (v, n) = subset_value(link, (j + 1) as f64 * link.lambda, kernel, ctrl, &mut table)?;
        out.push(v);
        terms = terms.max(n);
    }
    Ok((out, terms))
}

/// Assemble `Σ_D Pr[D] (Σ_{m∈D} E[h; m | D])` plus an empty-set constant.
pub(crate) fn assemble_general(
    terms: &[CandidateTerms],
    member_probs: &[f64],
    empty_value: f64,
) -> (f64, f64) {
    let relays = member_probs.len();
    let mut total = 0.0;
    let mut abs = 0.0;
    for d in DecodingSet::all(relays) {
        let pr = super::set_probability(member_probs, d);
        if d.is_empty() {
            total += pr * empty_value;
            abs += (pr * empty_value).abs();
            continue;
        }
        let mut inner = 0.0;
        let mut inner_abs = 0.0;
        for m in d.iter() {
            let (v, a) = terms[m].conditional(d);
            inner += v;
            inner_abs += a;
        }
        total += pr * inner;
        abs += pr * inner_abs;
    }
    (total, condition(abs, total))
}

/// Symmetric assembly with `l = |D|` relays decoding:
/// `(1-p)^M e₀ + Σ_l C(M,l) p^l (1-p)^{M-l} · l · Σ_j (-1)^j C(l-1,j) V_j`.
pub(crate) fn assemble_symmetric(values: &[f64], p: f64, empty_value: f64) -> Result<(f64, f64)> {
    use crate::specfn::binomial;
    let relays = values.len();
    let big_m = relays as u64;
    let mut total = (1.0 - p).powi(relays as i32) * empty_value;
    let mut abs = total.abs();
    for l in 1..=big_m {
        let pr = binomial(big_m, l)? * p.powi(l as i32) * (1.0 - p).powi((big_m - l) as i32);
        let mut inner = 0.0;
        let mut inner_abs = 0.0;
        for j in 0..l {
            let t = binomial(l - 1, j)? * values[j as usize];
            if j % 2 == 0 {
                inner += t;
            } else {
                inner -= t;
            }
            inner_abs += t.abs();
        }
        total += pr * l as f64 * inner;
        abs += pr * l as f64 * inner_abs;
    }
    Ok((total, condition(abs, total)))
}

fn condition(abs: f64, total: f64) -> f64 {
    if total == 0.0 {
        if abs == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        abs / total.abs()
    }
}
