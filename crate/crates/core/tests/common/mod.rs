#![allow(dead_code)]

pub mod golden;

use rand::Rng;
use relaysel::analytic::DecodingSet;
use relaysel::channel::{FadingParams, SystemConfig};
use relaysel::specfn::scaled_e1;

/// Random asymmetric configuration: ρ_f ∈ [0.5, 0.99], ρ_e ∈ [0.9, 1],
/// P ∈ [1, 100] and R_o ∈ [0.1, 1].
pub fn random_config<R: Rng>(rng: &mut R, relays: usize) -> SystemConfig {
    let link = |rng: &mut R| {
        let rho_e = rng.random_range(0.9..=1.0);
        let scale = rng.random_range(0.5..2.0);
        FadingParams::new(rho_e * scale, rho_e, rng.random_range(0.5..=0.99)).unwrap()
    };
    let power = rng.random_range(1.0..=100.0);
    let r_o: f64 = rng.random_range(0.1..=1.0);
    let mut cfg = SystemConfig::symmetric(relays, power, FadingParams::normalized(1.0, 1.0).unwrap());
    for i in 0..relays {
        cfg.source_links[i] = link(rng);
        cfg.relay_links[i] = link(rng);
    }
    cfg.rate = 0.5 * (1.0 + r_o * power).log2();
    cfg
}

/// Random nonempty decoding set and a member of it.
pub fn random_pick<R: Rng>(rng: &mut R, relays: usize) -> (DecodingSet, usize) {
    let bits = rng.random_range(1..(1u32 << relays));
    let d = DecodingSet::from_bits(bits);
    let members: Vec<usize> = d.iter().collect();
    (d, members[rng.random_range(0..members.len())])
}

/// Integrating the old SNR against `λ_m e^{-L g}` leaves the current SNR
/// exponential with rate `b = λ_m L / ((1-ρ_f²) L + ρ_f² λ_m)`, so
/// `E[h; m selected | D] = Σ_S (-1)^{|S|} (λ_m/L) E_b[h]` over `S ⊆ D∖{m}`.
pub fn collapsed(cfg: &SystemConfig, d: DecodingSet, m: usize, mean_h: impl Fn(f64) -> f64) -> f64 {
    let links = cfg.relay_params();
    let lm = links[m].lambda;
    let rf2 = links[m].rho_f * links[m].rho_f;
    let others: Vec<usize> = d.iter().filter(|&i| i != m).collect();
    let mut sum = 0.0;
    for mask in 0..(1u32 << others.len()) {
        let mut l = lm;
        for (j, &i) in others.iter().enumerate() {
            if mask >> j & 1 == 1 {
                l += links[i].lambda;
            }
        }
        let b = lm * l / ((1.0 - rf2) * l + rf2 * lm);
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * lm / l * mean_h(b);
    }
    sum
}

pub fn collapsed_outage(cfg: &SystemConfig, d: DecodingSet, m: usize) -> f64 {
    let r = cfg.threshold();
    collapsed(cfg, d, m, |b| -(-b * r).exp_m1())
}

pub fn collapsed_aser(cfg: &SystemConfig, d: DecodingSet, m: usize) -> f64 {
    let bp = cfg.beta * cfg.power;
    collapsed(cfg, d, m, |b| 0.5 * cfg.alpha * (1.0 - (bp / (bp + 2.0 * b)).sqrt()))
}

pub fn collapsed_capacity(cfg: &SystemConfig, d: DecodingSet, m: usize) -> f64 {
    let p = cfg.power;
    collapsed(cfg, d, m, |b| scaled_e1(b / p).unwrap() / (2.0 * std::f64::consts::LN_2))
}

pub fn collapsed_density(cfg: &SystemConfig, d: DecodingSet, m: usize, x: f64) -> f64 {
    collapsed(cfg, d, m, |b| b * (-b * x).exp())
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
