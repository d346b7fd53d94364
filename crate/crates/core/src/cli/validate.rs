//! Cross-checks of one configuration: series against quadrature, general
//! against identical-link formulas, analytic against simulation, and the
//! fresh-feedback closed form when it applies.

use std::fmt;

use serde::Serialize;

use super::sweep::{point_seed, simulate, Metric};
use crate::analytic::{oracle, AserMethod, DecodingSet, Model};
use crate::channel::SystemConfig;
use crate::specfn::SeriesControl;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<44} observed {:.3e}  tolerance {:.1e}",
            self.name, self.observed, self.tolerance
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, observed: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            observed,
            tolerance,
            passed: observed <= tolerance,
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub trials: u64,
    pub seed: u64,
    /// Multiply every `λ` seen by the analytic side; a self-test of the suite.
    pub corrupt_lambda: Option<f64>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            trials: 200_000,
            seed: 1,
            corrupt_lambda: None,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn validate(config: &SystemConfig, opts: &ValidateOptions) -> Result<Report> {
    config.validate()?;
    let ctrl = SeriesControl::default();
    let mut model = Model::new(config)?;
    if let Some(f) = opts.corrupt_lambda {
        model = model.with_lambda_scale(f);
    }
    let relays = model.relays();
    let full = DecodingSet::full(relays);
    let mut report = Report::default();

    // Outage terms are cheap: every (D, m) for small M, the full set otherwise.
    let sets: Vec<DecodingSet> = if relays <= 3 {
        DecodingSet::all(relays).filter(|d| !d.is_empty()).collect()
    } else {
        vec![full]
    };
    let mut worst: f64 = 0.0;
    for &d in &sets {
        for m in d.iter() {
            let s = model.outage_conditional(d, m, &ctrl)?;
            let q = oracle::outage_conditional_quadrature(d, m, config)?;
            worst = worst.max((s - q).abs());
        }
    }
    report.push("outage conditional: series vs quadrature", worst, 1e-6);
    let s = model.aser_conditional(full, 0, &ctrl, AserMethod::Exact)?;
    let q = oracle::aser_conditional_quadrature(full, 0, config)?;
    report.push("aser conditional: series vs quadrature", rel(s, q), 1e-6);
    let s = model.capacity_conditional(full, 0, &ctrl)?;
    let q = oracle::capacity_conditional_quadrature(full, 0, config)?;
    report.push("capacity conditional: series vs quadrature", rel(s, q), 1e-6);

    let outage = model.outage_general(&ctrl)?.value;
    let aser = model.aser_general(&ctrl, AserMethod::Exact)?.value;
    let capacity = model.capacity_general(&ctrl)?.value;
    if model.is_symmetric() {
        let pairs = [
            ("outage", outage, model.outage_symmetric(&ctrl)?.value),
            ("aser", aser, model.aser_symmetric(&ctrl, AserMethod::Exact)?.value),
            ("capacity", capacity, model.capacity_symmetric(&ctrl)?.value),
        ];
        for (name, g, s) in pairs {
            report.push(format!("{name}: general vs identical-link"), rel(g, s), 1e-10);
        }
    }

    let bounds = [
        ("outage", outage, 1.0),
        ("aser", aser, 0.5 * model.alpha),
    ];
    for (name, v, hi) in bounds {
        let out = if (0.0..=hi).contains(&v) { 0.0 } else { 1.0 };
        report.push(format!("{name}: value in range"), out, 0.0);
    }

    let metrics = [
        (Metric::Outage, outage),
        (Metric::Aser, aser),
        (Metric::Capacity, capacity),
    ];
    for (i, (metric, value)) in metrics.into_iter().enumerate() {
        let est = simulate(metric, config, opts.trials, point_seed(opts.seed, i))?;
        report.push(format!("{}: analytic vs simulation (z)", metric.as_str()), est.z_score(value), 3.0);
    }

    if model.relay.iter().all(|l| l.is_fresh()) {
        // The selected relay's SNR is the maximum of the decoders' exponentials.
        let probs = model.decode_probs();
        let closed: f64 = DecodingSet::all(relays)
            .map(|d| {
                crate::analytic::set_probability(&probs, d)
                    * d.iter()
                        .map(|i| -(-model.relay[i].lambda * model.threshold).exp_m1())
                        .product::<f64>()
            })
            .sum();
        report.push("fresh feedback: outage vs order statistics", (outage - closed).abs(), 1e-12);
    }

    if relays <= 4 {
        let mass = oracle::pdf_mass(full, config)?;
        report.push("conditional density: total mass", (mass - 1.0).abs(), 1e-8);
    }
    Ok(report)
}
