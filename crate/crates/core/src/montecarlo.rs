//! Monte-Carlo simulation of the selection protocol.
//!
//! Trials are split into fixed-size chunks. Chunk `i` draws from its own
//! ChaCha stream `i` under the run seed, and chunk partial sums are combined
//! in chunk order, so results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{substream, SystemConfig, TrialDraw, TrialSampler};
use crate::specfn::gaussian_q;
use crate::{Error, Result};

/// Trials per random stream.
pub const CHUNK_TRIALS: u64 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|value - mean| / std_error`; infinite if the estimate has zero spread
    /// and disagrees, zero if it agrees exactly.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = (value - self.mean).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Relay chosen by the destination: among those whose old source-link SNR
/// clears `threshold`, the one with the largest old relay-link SNR.
/// Ties go to the lowest index.
pub fn select_relay(draw: &TrialDraw, threshold: f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in draw.relays.iter().enumerate() {
        if r.gamma_sm_o < threshold {
            continue;
        }
        match best {
            Some(b) if draw.relays[b].gamma_md_o >= r.gamma_md_o => {}
            _ => best = Some(i),
        }
    }
    best
}

fn run<F>(config: &SystemConfig, trials: u64, seed: u64, per_trial: F) -> Result<McEstimate>
where
    F: Fn(&TrialDraw) -> f64 + Sync,
{
    config.validate()?;
    if trials == 0 {
        return Err(Error::arg("trials", "must be at least 1"));
    }
    let sampler = TrialSampler::new(config);
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut rng = substream(seed, c);
            let mut draw = TrialDraw::default();
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                sampler.fill(&mut rng, &mut draw);
                let x = per_trial(&draw);
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = trials as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0);
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials,
        seed,
    })
}

/// Frequency of outage: no relay decodes, or the selected relay's current
/// SNR is below `R_o`.
pub fn simulate_outage(config: &SystemConfig, trials: u64, seed: u64) -> Result<McEstimate> {
    let r_o = config.threshold();
    run(config, trials, seed, |d| match select_relay(d, r_o) {
        None => 1.0,
        Some(m) => (d.relays[m].gamma_md < r_o) as u8 as f64,
    })
}

/// Symbol error rate, averaged in closed form over the decoding events.
///
/// Relay `i` decodes correctly with probability `1 - αQ(√(βP γ̂_{si,o}))`.
/// Given the draws, the selected relay is the first decoder in order of
/// decreasing `γ̂_{id,o}`, so the conditional error probability is
/// `Σ_j Π_{i<j} e_i (1-e_j) αQ(√(βP γ̂_{jd})) + ½ Π_i e_i`.
pub fn simulate_ser(config: &SystemConfig, trials: u64, seed: u64) -> Result<McEstimate> {
    let (alpha, beta_p) = (config.alpha, config.beta * config.power);
    let relays = config.relays();
    run(config, trials, seed, move |d| {
        let mut order: Vec<usize> = (0..relays).collect();
        // stable sort keeps lower indices first on ties
        order.sort_by(|&a, &b| d.relays[b].gamma_md_o.total_cmp(&d.relays[a].gamma_md_o));
        let mut all_fail = 1.0;
        let mut err = 0.0;
        for &j in &order {
            let r = &d.relays[j];
            let e = alpha * gaussian_q((beta_p * r.gamma_sm_o).sqrt());
            err += all_fail * (1.0 - e) * alpha * gaussian_q((beta_p * r.gamma_md).sqrt());
            all_fail *= e;
        }
        err + 0.5 * all_fail
    })
}

/// Average of `½ log₂(1 + P γ̂)` over the selected relay, zero if none decodes.
pub fn simulate_capacity(config: &SystemConfig, trials: u64, seed: u64) -> Result<McEstimate> {
    let r_o = config.threshold();
    let power = config.power;
    run(config, trials, seed, move |d| match select_relay(d, r_o) {
        None => 0.0,
        Some(m) => 0.5 * (power * d.relays[m].gamma_md).ln_1p() / std::f64::consts::LN_2,
    })
}
