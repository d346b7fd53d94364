//! Closed-form performance metrics of selection decode-and-forward.
//!
//! Every metric is an average over decoding sets `D` of a per-set term, and
//! every per-set term is a sum over the candidate `m ∈ D` of
//! `E[h(γ̂_{md}); m is selected | D]` for a metric kernel `h`. Conditioned on
//! the old SNR, the current SNR is a Poisson mixture of gamma variables, and
//! the maximum over the other members of `D` expands by inclusion-exclusion.
//! Integrating out the old SNR leaves, for each subset `S` of the other
//! candidates, a geometric series over gamma moments of `h`.

mod aser;
mod capacity;
pub mod oracle;
mod outage;
mod series;

pub use aser::{
    aser_conditional, aser_conditional_pdf, aser_conditional_pdf_term, aser_total, aser_total_general,
    aser_total_symmetric, relay_error_prob, AserMethod,
};
pub use capacity::{
    capacity_conditional, capacity_lb_avg, capacity_total_general, capacity_total_symmetric, log_integral_identity,
};
pub use outage::{
    cdf_current_given_old, cdf_max_others, outage_conditional, outage_total,
    outage_total_general, outage_total_symmetric, prob_decoding_set, prob_relay_decodes,
};

use serde::Serialize;

use crate::channel::{LinkParams, SystemConfig};
use crate::{Error, Result};

/// Largest relay count handled; the general path costs `O(M·3^M)` series.
pub const MAX_RELAYS: usize = 12;

/// A subset of relay indices, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DecodingSet {
    bits: u32,
}

impl DecodingSet {
    pub const fn empty() -> Self {
        Self { bits: 0 }
    }

    /// All of relays `0..relays`.
    pub fn full(relays: usize) -> Self {
        debug_assert!(relays <= 32);
        Self {
            bits: if relays == 32 { u32::MAX } else { (1u32 << relays) - 1 },
        }
    }

    pub const fn from_bits(bits: u32) -> Self {
        Self { bits }
    }

    /// Build from indices, rejecting duplicates and indices `≥ relays`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I, relays: usize) -> Result<Self> {
        let mut set = Self::empty();
        for i in indices {
            if i >= relays {
                return Err(Error::arg("D", format!("relay index {i} out of range 0..{relays}")));
            }
            if set.contains(i) {
                return Err(Error::arg("D", format!("relay index {i} listed twice")));
            }
            set.bits |= 1 << i;
        }
        Ok(set)
    }

    pub const fn bits(self) -> u32 {
        self.bits
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.bits & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn without(self, i: usize) -> Self {
        Self {
            bits: self.bits & !(1 << i),
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// All `2^relays` subsets of `0..relays`, in increasing mask order.
    pub fn all(relays: usize) -> impl Iterator<Item = DecodingSet> {
        (0..(1u32 << relays)).map(DecodingSet::from_bits)
    }

    fn check_within(self, relays: usize) -> Result<()> {
        if self.bits & !Self::full(relays).bits != 0 {
            return Err(Error::arg("D", format!("contains relays outside 0..{relays}")));
        }
        Ok(())
    }

    fn check_member(self, m: usize) -> Result<()> {
        if !self.contains(m) {
            return Err(Error::arg("m", format!("relay {m} is not in the decoding set")));
        }
        Ok(())
    }
}

impl std::fmt::Display for DecodingSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A metric value together with its numerical diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricResult {
    pub value: f64,
    /// Longest series evaluated, in terms.
    pub series_terms_used: usize,
    /// `Σ|term| / |Σ term|` over the inclusion-exclusion expansion.
    pub condition_estimate: f64,
    pub oracle_value: Option<f64>,
}

impl MetricResult {
    pub fn is_well_conditioned(&self) -> bool {
        self.condition_estimate <= crate::specfn::CONDITION_LIMIT
    }
}

/// Per-link constants of a configuration at its transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub source: Vec<LinkParams>,
    pub relay: Vec<LinkParams>,
    /// Outage threshold `R_o` on the normalized SNR.
    pub threshold: f64,
    pub power: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Model {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            source: config.source_params(),
            relay: config.relay_params(),
            threshold: config.threshold(),
            power: config.power,
            alpha: config.alpha,
            beta: config.beta,
        })
    }

    pub fn relays(&self) -> usize {
        self.relay.len()
    }

    /// All source links share parameters, and so do all relay links.
    pub fn is_symmetric(&self) -> bool {
        let same = |v: &[LinkParams]| v.windows(2).all(|w| w[0] == w[1]);
        same(&self.source) && same(&self.relay)
    }

    /// Multiply every rate `λ` by `factor`. Test hook for oracle sensitivity.
    #[doc(hidden)]
    pub fn with_lambda_scale(mut self, factor: f64) -> Self {
        for p in self.source.iter_mut().chain(self.relay.iter_mut()) {
            p.lambda *= factor;
            p.c *= factor;
            p.theta /= factor;
        }
        self
    }

    /// Probability that relay `i` decodes, `e^{-λ_{si} R_o}`.
    pub(crate) fn decode_probs(&self) -> Vec<f64> {
        self.source
            .iter()
            .map(|p| prob_relay_decodes(p, self.threshold))
            .collect()
    }

    pub(crate) fn check_set(&self, d: DecodingSet) -> Result<()> {
        d.check_within(self.relays())
    }
}

/// `Pr[D]` when relay `i` joins the set independently with probability `p[i]`.
pub(crate) fn set_probability(p: &[f64], d: DecodingSet) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &pi)| if d.contains(i) { pi } else { 1.0 - pi })
        .product()
}
