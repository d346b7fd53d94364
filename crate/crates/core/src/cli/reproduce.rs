//! Parameter presets of the reference figures, evaluated under the reference
//! `λ` convention.
//!
//! | figure | metric | relays | curves |
//! |---|---|---|---|
//! | 1 | outage | 4 | ρ_f ∈ {0.6, 0.7, 0.8, 0.9, 1} |
//! | 2 | outage | 2, 3, 4 | ρ_f ∈ {0.9, 1} |
//! | 3 | outage | 2 | ρ_f = 0.9, ρ_e ∈ {0.9, 0.95, 0.99, 1} |
//! | 4 | error rate | 3 | ρ_f ∈ {0.6, 0.7, 0.8, 0.9, 1} |
//! | 5 | error rate | 2 | ρ_f = 0.9, ρ_e ∈ {0.9, 0.95, 0.99, 1} |
//! | 6 | diversity | 4 | ρ_f ∈ {0.6, 0.7, 0.8, 0.9, 1} |
//! | 7 | diversity | 2, 3, 4 | ρ_f = 0.9 |
//! | 8 | diversity | 3 | ρ_f = 0.9, ρ_e ∈ {0.9, 0.95, 0.99, 1} |
//! | 9 | capacity | 2 | (ρ_f, ρ_e) ∈ {0.9, 1} × {0.95, 1} |
//!
//! ρ_e = 1 unless listed.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use super::sweep::{run_sweep, write_csv, Metric, MetricPoint, Mode, SweepSpec};
use super::CliError;
use crate::channel::{FadingParams, LambdaConvention, SystemConfig};
use crate::{Error, Result};

const RHO_F_GRID: [f64; 5] = [0.6, 0.7, 0.8, 0.9, 1.0];
const RHO_E_GRID: [f64; 4] = [0.9, 0.95, 0.99, 1.0];

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub config: SystemConfig,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub id: u32,
    pub metric: Metric,
    pub snr_db: Vec<f64>,
    pub curves: Vec<Curve>,
}

fn grid(stop: f64) -> Vec<f64> {
    (0..=(stop / 2.0) as usize).map(|i| 2.0 * i as f64).collect()
}

fn curve(relays: usize, rho_e: f64, rho_f: f64) -> Curve {
    let link = FadingParams::normalized(rho_e, rho_f).expect("preset parameters are valid");
    Curve {
        label: format!("M{relays}_rho_e_{rho_e}_rho_f_{rho_f}"),
        config: SystemConfig::symmetric(relays, 1.0, link).with_convention(LambdaConvention::Paper),
    }
}

pub fn figure(id: u32) -> Result<Figure> {
    let (metric, stop, curves): (Metric, f64, Vec<Curve>) = match id {
        1 => (Metric::Outage, 30.0, RHO_F_GRID.iter().map(|&f| curve(4, 1.0, f)).collect()),
        2 => (
            Metric::Outage,
            30.0,
            [2, 3, 4]
                .iter()
                .flat_map(|&m| [0.9, 1.0].map(|f| curve(m, 1.0, f)))
                .collect(),
        ),
        3 => (Metric::Outage, 50.0, RHO_E_GRID.iter().map(|&e| curve(2, e, 0.9)).collect()),
        4 => (Metric::Aser, 30.0, RHO_F_GRID.iter().map(|&f| curve(3, 1.0, f)).collect()),
        5 => (Metric::Aser, 50.0, RHO_E_GRID.iter().map(|&e| curve(2, e, 0.9)).collect()),
        6 => (Metric::Diversity, 40.0, RHO_F_GRID.iter().map(|&f| curve(4, 1.0, f)).collect()),
        7 => (Metric::Diversity, 40.0, [2, 3, 4].iter().map(|&m| curve(m, 1.0, 0.9)).collect()),
        8 => (Metric::Diversity, 50.0, RHO_E_GRID.iter().map(|&e| curve(3, e, 0.9)).collect()),
        9 => (
            Metric::Capacity,
            50.0,
            [(0.9, 0.95), (1.0, 0.95), (0.9, 1.0), (1.0, 1.0)]
                .iter()
                .map(|&(f, e)| curve(2, e, f))
                .collect(),
        ),
        other => return Err(Error::config("figure", format!("unknown figure {other}, expected 1 to 9"))),
    };
    Ok(Figure {
        id,
        metric,
        snr_db: grid(stop),
        curves,
    })
}

#[derive(Debug, Clone)]
pub struct CurveData {
    pub label: String,
    pub path: PathBuf,
    pub rows: Vec<MetricPoint>,
}

/// Evaluate figure `id` and write one CSV per curve into `out_dir`.
pub fn reproduce_figure(
    id: u32,
    out_dir: &Path,
    mode: Mode,
    trials: u64,
    seed: u64,
) -> std::result::Result<Vec<CurveData>, CliError> {
    let fig = figure(id)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut out = Vec::with_capacity(fig.curves.len());
    for c in fig.curves {
        let spec = SweepSpec {
            metric: fig.metric,
            snr_db: fig.snr_db.clone(),
            mode,
            trials,
            seed,
            config: c.config,
            input: None,
        };
        let rows = run_sweep(&spec)?;
        let path = out_dir.join(format!("fig{id}_{}.csv", c.label));
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        write_csv(&rows, BufWriter::new(file))?;
        out.push(CurveData {
            label: c.label,
            path,
            rows,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert_eq!(figure(1).unwrap().curves.len(), 5);
        assert_eq!(figure(2).unwrap().curves.len(), 6);
        for id in 1..=9 {
            let f = figure(id).unwrap();
            assert_eq!(f.snr_db[0], 0.0);
            assert!(f.curves.iter().all(|c| c.config.lambda_convention == LambdaConvention::Paper));
        }
        assert!(figure(0).is_err());
        assert!(figure(10).is_err());
    }
}
