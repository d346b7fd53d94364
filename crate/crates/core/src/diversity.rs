//! Finite-SNR diversity order: the negative slope of `log₁₀(metric)` against
//! `log₁₀(SNR)`, with `snr_db / 10` as the abscissa.

use serde::Serialize;

use crate::analytic::{AserMethod, Model};
use crate::channel::SystemConfig;
use crate::specfn::SeriesControl;
use crate::{Error, Result};

/// `(snr_db, value)` pairs with strictly increasing SNR and positive values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    points: Vec<(f64, f64)>,
}

impl SweepCurve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::arg("points", "SNR values must be strictly increasing"));
        }
        if let Some(&(snr, v)) = points.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
            return Err(Error::arg(
                "points",
                format!("value at {snr} dB must be positive and finite, got {v}"),
            ));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn logs(&self) -> (Vec<f64>, Vec<f64>) {
        self.points.iter().map(|&(s, v)| (s / 10.0, v.log10())).unzip()
    }
}

/// Local diversity order at each point: central differences inside,
/// one-sided at the ends.
pub fn effective_diversity(curve: &SweepCurve) -> Result<Vec<(f64, f64)>> {
    let n = curve.points.len();
    if n < 2 {
        return Err(Error::arg("curve", "need at least two points"));
    }
    let (x, y) = curve.logs();
    Ok((0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (curve.points[i].0, -(y[hi] - y[lo]) / (x[hi] - x[lo]))
        })
        .collect())
}

/// Least-squares diversity order over the points with `lo_db ≤ snr ≤ hi_db`.
pub fn fitted_slope(curve: &SweepCurve, lo_db: f64, hi_db: f64) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = curve
        .points
        .iter()
        .filter(|p| p.0 >= lo_db && p.0 <= hi_db)
        .map(|&(s, v)| (s / 10.0, v.log10()))
        .unzip();
    if x.len() < 2 {
        return Err(Error::arg("range", format!("fewer than two points in [{lo_db}, {hi_db}] dB")));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(-sxy / sxx)
}

/// Error-rate sweep of a configuration over `snr_db`.
pub fn aser_sweep(
    config: &SystemConfig,
    snr_db: &[f64],
    ctrl: &SeriesControl,
    method: AserMethod,
) -> Result<SweepCurve> {
    let points = snr_db
        .iter()
        .map(|&s| {
            let model = Model::new(&config.with_power_db(s))?;
            Ok((s, model.aser(ctrl, method)?.value))
        })
        .collect::<Result<Vec<_>>>()?;
    SweepCurve::new(points)
}

/// Which high-SNR behaviour a configuration should show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Fresh and exact estimates: slope equals the relay count.
    FullDiversity,
    /// Outdated but exact estimates: slope one.
    OutdatedFeedback,
    /// Estimation error: error floor, slope zero.
    EstimationError,
}

impl Regime {
    pub fn of(config: &SystemConfig) -> Self {
        let links = || config.source_links.iter().chain(&config.relay_links);
        if links().any(|l| l.rho_e < 1.0) {
            Regime::EstimationError
        } else if config.relay_links.iter().any(|l| l.rho_f < 1.0) {
            Regime::OutdatedFeedback
        } else {
            Regime::FullDiversity
        }
    }

    /// Accepted range of the terminal slope.
    pub fn bounds(self, relays: usize) -> (f64, f64) {
        match self {
            Regime::FullDiversity => (relays as f64 - 0.3, relays as f64 + 0.3),
            Regime::OutdatedFeedback => (0.85, 1.15),
            Regime::EstimationError => (f64::NEG_INFINITY, 0.2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityReport {
    pub regime: Regime,
    /// Least-squares slope over the top 10 dB of the sweep.
    pub terminal_slope: f64,
    pub lower: f64,
    pub upper: f64,
    pub passed: bool,
    pub curve: Vec<(f64, f64)>,
}

/// Sweep `base` over `snr_db` and test its terminal slope against the regime
/// its estimation and feedback parameters call for.
pub fn asymptotic_checks(
    base: &SystemConfig,
    snr_db: &[f64],
    ctrl: &SeriesControl,
    method: AserMethod,
) -> Result<DiversityReport> {
    let last = match (snr_db.first(), snr_db.last()) {
        (Some(&a), Some(&b)) if snr_db.len() >= 3 && b - a >= 10.0 => b,
        _ => {
            return Err(Error::arg(
                "snr_db",
                "insufficient SNR range: need at least three points spanning 10 dB",
            ))
        }
    };
    let curve = aser_sweep(base, snr_db, ctrl, method)?;
    let terminal_slope = fitted_slope(&curve, last - 10.0, last)?;
    let regime = Regime::of(base);
    let (lower, upper) = regime.bounds(base.relays());
    Ok(DiversityReport {
        regime,
        terminal_slope,
        lower,
        upper,
        passed: terminal_slope >= lower && terminal_slope <= upper,
        curve: effective_diversity(&curve)?,
    })
}
