//! Channel model: fading/estimation/delay parameters, the per-link constants
//! derived from them, and the correlated sampler behind the Monte-Carlo engine.
//!
//! Each link carries an estimate `ĥ` of its true gain with `h = ρ_e ĥ + u`, and
//! an older estimate `ĥ_o` used for selection, related by
//! `ĥ = ρ_f ĥ_o + σ_ĥ √(1-ρ_f²) v`. The normalized effective SNR
//! `γ̂ = ρ_e² |ĥ|² / (1 + P σ_u²)` is exponential; its rate `λ` is what the
//! closed forms consume.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::specfn::bessel_j0;
use crate::{Error, Result};

/// How the exponential rate `λ` of `γ̂` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LambdaConvention {
    /// `λ = (1 + P σ_u²) / ρ_e`, matching the reference curves.
    Paper,
    /// `λ = (1 + P σ_u²) / (ρ_e² σ_ĥ²)`, the exact rate of the sampled `γ̂`.
    #[default]
    Derived,
}

impl std::str::FromStr for LambdaConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "derived" => Ok(Self::Derived),
            other => Err(Error::config(
                "lambda_convention",
                format!("expected `paper` or `derived`, got `{other}`"),
            )),
        }
    }
}

/// Statistics of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    /// Variance of the true channel gain.
    pub sigma2_h: f64,
    /// Correlation between true and estimated channel, in `(0, 1]`.
    pub rho_e: f64,
    /// Correlation between the selection-time and current estimate, in `[0, 1]`.
    pub rho_f: f64,
}

impl FadingParams {
    pub fn new(sigma2_h: f64, rho_e: f64, rho_f: f64) -> Result<Self> {
        let p = Self {
            sigma2_h,
            rho_e,
            rho_f,
        };
        p.validate("link")?;
        Ok(p)
    }

    /// Unit-variance estimates: `σ_ĥ² = 1`, `σ_h² = ρ_e`.
    pub fn normalized(rho_e: f64, rho_f: f64) -> Result<Self> {
        Self::new(rho_e, rho_e, rho_f)
    }

    pub(crate) fn validate(&self, path: &str) -> Result<()> {
        if !(self.sigma2_h > 0.0 && self.sigma2_h.is_finite()) {
            return Err(Error::config(
                format!("{path}.sigma2_h"),
                format!("must be positive, got {}", self.sigma2_h),
            ));
        }
        if !(self.rho_e > 0.0 && self.rho_e <= 1.0) {
            return Err(Error::config(
                format!("{path}.rho_e"),
                format!("must lie in (0, 1], got {}", self.rho_e),
            ));
        }
        if !(0.0..=1.0).contains(&self.rho_f) {
            return Err(Error::config(
                format!("{path}.rho_f"),
                format!("must lie in [0, 1], got {}", self.rho_f),
            ));
        }
        Ok(())
    }
}

/// Constants derived from [`FadingParams`] at a given transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkParams {
    /// Estimated-channel variance `σ_ĥ² = σ_h² / ρ_e`.
    pub sigma2_hat: f64,
    /// `σ_u² = (1 - ρ_e) σ_h²`.
    pub sigma2_u: f64,
    /// `σ_e² = (1 - ρ_e) σ_ĥ²`.
    pub sigma2_e: f64,
    /// Exponential rate of `γ̂`.
    pub lambda: f64,
    /// Non-centrality coupling `c = 2ρ_f²λ/(1-ρ_f²)`; infinite when `ρ_f = 1`.
    pub c: f64,
    /// Per-dimension variance scale of `γ̂` given `γ̂_o`: `2θλ = 1 - ρ_f²`.
    pub theta: f64,
    pub rho_e: f64,
    pub rho_f: f64,
}

impl LinkParams {
    /// Selection is made on a channel identical to the one used (`ρ_f = 1`).
    pub fn is_fresh(&self) -> bool {
        self.rho_f >= 1.0
    }

    /// Rate `λ/(1-ρ_f²)` of the central part of `γ̂` given `γ̂_o`.
    pub fn current_rate(&self) -> f64 {
        self.lambda / (1.0 - self.rho_f * self.rho_f)
    }

    /// `c/2 = ρ_f² λ/(1-ρ_f²)`.
    pub fn half_c(&self) -> f64 {
        self.rho_f * self.rho_f * self.current_rate()
    }

    /// Multiplier taking `|ĥ|²` to `γ̂` so that `E[γ̂] = 1/λ`.
    pub fn snr_gain(&self) -> f64 {
        1.0 / (self.sigma2_hat * self.lambda)
    }
}

/// Derive the per-link constants at transmit power `power` (noise power 1).
pub fn derive_link_params(
    fp: &FadingParams,
    power: f64,
    convention: LambdaConvention,
) -> LinkParams {
    let sigma2_hat = fp.sigma2_h / fp.rho_e;
    let sigma2_u = (1.0 - fp.rho_e) * fp.sigma2_h;
    let sigma2_e = (1.0 - fp.rho_e) * sigma2_hat;
    let noise = 1.0 + power * sigma2_u;
    let lambda = match convention {
        LambdaConvention::Paper => noise / fp.rho_e,
        LambdaConvention::Derived => noise / (fp.rho_e * fp.rho_e * sigma2_hat),
    };
    let (c, theta) = if fp.rho_f >= 1.0 {
        (f64::INFINITY, 0.0)
    } else {
        let rf2 = fp.rho_f * fp.rho_f;
        (2.0 * rf2 * lambda / (1.0 - rf2), (1.0 - rf2) / (2.0 * lambda))
    };
    LinkParams {
        sigma2_hat,
        sigma2_u,
        sigma2_e,
        lambda,
        c,
        theta,
        rho_e: fp.rho_e,
        rho_f: fp.rho_f,
    }
}

/// Block-to-block correlation of a Jakes-faded channel, `J₀(2π f_d T i)`.
pub fn doppler_correlation(doppler_hz: f64, block_s: f64, lag: u32) -> Result<f64> {
    if !(doppler_hz >= 0.0) {
        return Err(Error::arg("doppler_hz", "must be nonnegative"));
    }
    if !(block_s > 0.0) {
        return Err(Error::arg("block_s", "must be positive"));
    }
    if lag == 0 {
        return Err(Error::arg("lag", "must be a positive number of blocks"));
    }
    Ok(bessel_j0(2.0 * std::f64::consts::PI * doppler_hz * block_s * lag as f64))
}

/// [`doppler_correlation`] checked for use as `ρ_f`, which must lie in `[0, 1]`.
pub fn feedback_correlation(doppler_hz: f64, block_s: f64, lag: u32) -> Result<f64> {
    let rho = doppler_correlation(doppler_hz, block_s, lag)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::config(
            "rho_f",
            format!("Doppler correlation {rho:.6} is outside [0, 1]; shorten the feedback delay"),
        ));
    }
    Ok(rho)
}

/// Complete system description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Transmit power `P` of source and relays, noise power normalized to one.
    pub power: f64,
    /// Target end-to-end rate `R` in bits/s/Hz.
    pub rate: f64,
    /// Modulation constants of `α Q(√(βγ))`.
    pub alpha: f64,
    pub beta: f64,
    /// Source→relay links, one per relay.
    pub source_links: Vec<FadingParams>,
    /// Relay→destination links, one per relay.
    pub relay_links: Vec<FadingParams>,
    pub lambda_convention: LambdaConvention,
}

impl SystemConfig {
    /// `relays` identical relays with the given per-link statistics on both hops.
    /// BPSK (`α = 1`, `β = 2`) and `R = 1`.
    pub fn symmetric(relays: usize, power: f64, link: FadingParams) -> Self {
        Self {
            power,
            rate: 1.0,
            alpha: 1.0,
            beta: 2.0,
            source_links: vec![link; relays],
            relay_links: vec![link; relays],
            lambda_convention: LambdaConvention::Derived,
        }
    }

    pub fn relays(&self) -> usize {
        self.relay_links.len()
    }

    pub fn with_power(&self, power: f64) -> Self {
        Self {
            power,
            ..self.clone()
        }
    }

    pub fn with_power_db(&self, power_db: f64) -> Self {
        self.with_power(db_to_linear(power_db))
    }

    pub fn with_convention(&self, lambda_convention: LambdaConvention) -> Self {
        Self {
            lambda_convention,
            ..self.clone()
        }
    }

    /// Outage threshold `R_o = (2^{2R} - 1)/P` on the normalized SNR.
    pub fn threshold(&self) -> f64 {
        (2f64.powf(2.0 * self.rate) - 1.0) / self.power
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.relay_links.len();
        if m == 0 {
            return Err(Error::config("M", "at least one relay is required"));
        }
        if m > crate::analytic::MAX_RELAYS {
            return Err(Error::config(
                "M",
                format!("at most {} relays are supported", crate::analytic::MAX_RELAYS),
            ));
        }
        if self.source_links.len() != m {
            return Err(Error::config(
                "source_links",
                format!("expected {m} entries, got {}", self.source_links.len()),
            ));
        }
        for (name, v) in [
            ("power", self.power),
            ("rate", self.rate),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("must be positive, got {v}")));
            }
        }
        for (i, l) in self.source_links.iter().enumerate() {
            l.validate(&format!("source_links[{i}]"))?;
        }
        for (i, l) in self.relay_links.iter().enumerate() {
            l.validate(&format!("relay_links[{i}]"))?;
        }
        if !(self.threshold() > 0.0) {
            return Err(Error::config("rate", "outage threshold must be positive"));
        }
        Ok(())
    }

    pub fn source_params(&self) -> Vec<LinkParams> {
        self.source_links
            .iter()
            .map(|l| derive_link_params(l, self.power, self.lambda_convention))
            .collect()
    }

    pub fn relay_params(&self) -> Vec<LinkParams> {
        self.relay_links
            .iter()
            .map(|l| derive_link_params(l, self.power, self.lambda_convention))
            .collect()
    }

    /// All source links share parameters, and so do all relay links.
    pub fn is_symmetric(&self) -> bool {
        let same = |v: &[FadingParams]| v.windows(2).all(|w| w[0] == w[1]);
        same(&self.source_links) && same(&self.relay_links)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Channel estimates and normalized SNRs of one relay in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RelayDraw {
    pub h_sm_o_hat: Complex64,
    pub h_sm_hat: Complex64,
    pub h_md_o_hat: Complex64,
    pub h_md_hat: Complex64,
    pub gamma_sm_o: f64,
    pub gamma_md_o: f64,
    pub gamma_md: f64,
}

/// One Monte-Carlo realization for all relays.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrialDraw {
    pub relays: Vec<RelayDraw>,
}

/// Per-link constants needed to draw a correlated estimate pair.
#[derive(Debug, Clone, Copy)]
struct PairSampler {
    sigma_hat: f64,
    rho_f: f64,
    innovation: f64,
    gain: f64,
}

impl PairSampler {
    fn new(p: &LinkParams) -> Self {
        Self {
            sigma_hat: p.sigma2_hat.sqrt(),
            rho_f: p.rho_f,
            innovation: (1.0 - p.rho_f * p.rho_f).max(0.0).sqrt(),
            gain: p.snr_gain(),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Complex64, Complex64) {
        let old = circular_gaussian(rng) * self.sigma_hat;
        if self.rho_f >= 1.0 {
            return (old, old);
        }
        let v = circular_gaussian(rng);
        let current = old * self.rho_f + v * (self.sigma_hat * self.innovation);
        (old, current)
    }
}

/// Unit-variance circular complex Gaussian.
fn circular_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws [`TrialDraw`]s for a fixed configuration.
#[derive(Debug, Clone)]
pub struct TrialSampler {
    source: Vec<PairSampler>,
    relay: Vec<PairSampler>,
}

impl TrialSampler {
    pub fn new(config: &SystemConfig) -> Self {
        Self::from_params(&config.source_params(), &config.relay_params())
    }

    pub fn from_params(source: &[LinkParams], relay: &[LinkParams]) -> Self {
        Self {
            source: source.iter().map(PairSampler::new).collect(),
            relay: relay.iter().map(PairSampler::new).collect(),
        }
    }

    pub fn relays(&self) -> usize {
        self.relay.len()
    }

    /// Overwrite `draw` with a fresh realization.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, draw: &mut TrialDraw) {
        draw.relays.resize(self.relay.len(), RelayDraw::default());
        for ((slot, src), dst) in draw.relays.iter_mut().zip(&self.source).zip(&self.relay) {
            let (sm_old, sm_now) = src.draw(rng);
            let (md_old, md_now) = dst.draw(rng);
            *slot = RelayDraw {
                h_sm_o_hat: sm_old,
                h_sm_hat: sm_now,
                h_md_o_hat: md_old,
                h_md_hat: md_now,
                gamma_sm_o: src.gain * sm_old.norm_sqr(),
                gamma_md_o: dst.gain * md_old.norm_sqr(),
                gamma_md: dst.gain * md_now.norm_sqr(),
            };
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TrialDraw {
        let mut draw = TrialDraw::default();
        self.fill(rng, &mut draw);
        draw
    }
}

/// Draw one realization of every link.
pub fn sample_trial<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> TrialDraw {
    TrialSampler::new(config).sample(rng)
}

/// Deterministic random stream number `stream` under `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
