//! SNR sweeps of one metric, analytic and/or simulated, written as CSV.

use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::CliError;
use crate::analytic::{AserMethod, MetricResult, Model};
use crate::channel::SystemConfig;
use crate::diversity::{effective_diversity, SweepCurve};
use crate::montecarlo::{self, McEstimate};
use crate::specfn::SeriesControl;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Outage,
    Aser,
    Capacity,
    Diversity,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Aser => "aser",
            Metric::Capacity => "capacity",
            Metric::Diversity => "diversity",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outage" => Ok(Metric::Outage),
            "aser" => Ok(Metric::Aser),
            "capacity" => Ok(Metric::Capacity),
            "diversity" => Ok(Metric::Diversity),
            other => Err(Error::config(
                "metric",
                format!("expected outage, aser, capacity or diversity, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Mc,
    Both,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Analytic => "analytic",
            Mode::Mc => "mc",
            Mode::Both => "both",
        }
    }

    fn analytic(self) -> bool {
        self != Mode::Mc
    }

    fn mc(self) -> bool {
        self != Mode::Analytic
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "mc" => Ok(Mode::Mc),
            "both" => Ok(Mode::Both),
            other => Err(Error::config("mode", format!("expected analytic, mc or both, got `{other}`"))),
        }
    }
}

/// Parse `START:STOP:STEP` (inclusive) or a single value.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::config("snr-db", format!("{why} in `{s}`"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
        .collect::<Result<_>>()?;
    if parts.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite value"));
    }
    match parts[..] {
        [v] => Ok(vec![v]),
        [start, stop, step] => {
            if !(step > 0.0) || stop < start {
                return Err(bad("need STEP > 0 and STOP ≥ START"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n >= 100_000 {
                return Err(bad("too many grid points"));
            }
            // round away representation noise such as 0.30000000000000004
            Ok((0..=n)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(bad("expected START:STOP:STEP")),
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub metric: Metric,
    pub snr_db: Vec<f64>,
    pub mode: Mode,
    pub trials: u64,
    pub seed: u64,
    pub config: SystemConfig,
    /// Error-rate sweep to differentiate, for the diversity metric.
    pub input: Option<Vec<MetricPoint>>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() && self.input.is_none() {
            return Err(Error::config("snr-db", "SNR grid is empty"));
        }
        if self.mode.mc() && self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1 for Monte-Carlo runs"));
        }
        self.config.validate()
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricPoint {
    pub snr_db: f64,
    pub metric: Metric,
    pub mode: Mode,
    pub value: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub z_score: Option<f64>,
    pub series_terms: Option<usize>,
    pub condition_estimate: Option<f64>,
    pub diversity: Option<f64>,
    /// Why the analytic value is missing.
    #[serde(skip)]
    pub error: Option<String>,
}

pub const COLUMNS: [&str; 9] = [
    "snr_db",
    "metric",
    "mode",
    "value",
    "mc_mean",
    "mc_stderr",
    "z_score",
    "series_terms",
    "condition_estimate",
];

/// Seed of grid point `i`, so that points draw from unrelated streams.
pub fn point_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn analytic_value(metric: Metric, model: &Model, ctrl: &SeriesControl, method: AserMethod) -> Result<MetricResult> {
    match metric {
        Metric::Outage => model.outage(ctrl),
        Metric::Aser | Metric::Diversity => model.aser(ctrl, method),
        Metric::Capacity => model.capacity(ctrl),
    }
}

pub fn simulate(metric: Metric, config: &SystemConfig, trials: u64, seed: u64) -> Result<McEstimate> {
    match metric {
        Metric::Outage => montecarlo::simulate_outage(config, trials, seed),
        Metric::Aser | Metric::Diversity => montecarlo::simulate_ser(config, trials, seed),
        Metric::Capacity => montecarlo::simulate_capacity(config, trials, seed),
    }
}

fn point(spec: &SweepSpec, i: usize, snr: f64) -> Result<MetricPoint> {
    let config = spec.config.with_power_db(snr);
    let ctrl = SeriesControl::default();
    let method = AserMethod::for_convention(config.lambda_convention);
    let mut row = MetricPoint {
        snr_db: snr,
        metric: spec.metric,
        mode: spec.mode,
        value: None,
        mc_mean: None,
        mc_stderr: None,
        z_score: None,
        series_terms: None,
        condition_estimate: None,
        diversity: None,
        error: None,
    };
    if spec.mode.analytic() {
        match Model::new(&config).and_then(|m| analytic_value(spec.metric, &m, &ctrl, method)) {
            Ok(r) => {
                row.value = Some(r.value);
                row.series_terms = Some(r.series_terms_used);
                row.condition_estimate = Some(r.condition_estimate);
            }
            Err(e) if e.is_numerical() => row.error = Some(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    if spec.mode.mc() {
        let est = simulate(spec.metric, &config, spec.trials, point_seed(spec.seed, i))?;
        row.mc_mean = Some(est.mean);
        row.mc_stderr = Some(est.std_error);
        row.z_score = row.value.map(|v| est.z_score(v));
    }
    Ok(row)
}

/// Attach local diversity orders, taken from the analytic value where present
/// and the simulated mean otherwise. Rows without a positive value get none.
pub fn append_diversity(rows: &mut [MetricPoint]) -> Result<()> {
    let usable: Vec<(usize, f64, f64)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let v = r.value.or(r.mc_mean)?;
            (v > 0.0).then_some((i, r.snr_db, v))
        })
        .collect();
    if usable.len() < 2 {
        return Err(Error::config("input", "need at least two rows with positive values"));
    }
    let curve = SweepCurve::new(usable.iter().map(|&(_, s, v)| (s, v)).collect())?;
    for ((i, ..), (_, d)) in usable.iter().zip(effective_diversity(&curve)?) {
        rows[*i].diversity = Some(d);
        rows[*i].metric = Metric::Diversity;
    }
    Ok(())
}

/// Evaluate every grid point; points run in parallel and come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MetricPoint>> {
    spec.validate()?;
    if spec.metric == Metric::Diversity {
        if let Some(input) = &spec.input {
            let mut rows = input.clone();
            rows.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
            append_diversity(&mut rows)?;
            return Ok(rows);
        }
    }
    let mut rows: Vec<MetricPoint> = spec
        .snr_db
        .par_iter()
        .enumerate()
        .map(|(i, &snr)| point(spec, i, snr))
        .collect::<Result<_>>()?;
    if spec.metric == Metric::Diversity {
        append_diversity(&mut rows)?;
    }
    Ok(rows)
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write rows with the fixed header; a `diversity` column is added when any
/// row carries one.
pub fn write_csv<W: Write>(rows: &[MetricPoint], out: W) -> std::result::Result<(), CliError> {
    let with_div = rows.iter().any(|r| r.diversity.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if with_div {
        header.push("diversity");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.snr_db.to_string(),
            r.metric.as_str().to_string(),
            r.mode.as_str().to_string(),
            cell(r.value),
            cell(r.mc_mean),
            cell(r.mc_stderr),
            cell(r.z_score),
            cell(r.series_terms),
            cell(r.condition_estimate),
        ];
        if with_div {
            rec.push(cell(r.diversity));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Read rows back from a sweep CSV.
pub fn read_csv<R: Read>(input: R) -> std::result::Result<Vec<MetricPoint>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let idx: Vec<Option<usize>> = COLUMNS.iter().map(|c| col(c)).collect();
    if idx[0].is_none() || (idx[3].is_none() && idx[4].is_none()) {
        return Err(Error::config("input", "CSV needs snr_db and value or mc_mean columns").into());
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let get = |k: usize| idx[k].and_then(|i| rec.get(i)).filter(|s| !s.is_empty());
        let num = |k: usize| -> std::result::Result<Option<f64>, CliError> {
            get(k)
                .map(|s| {
                    s.parse::<f64>().map_err(|_| {
                        Error::config(format!("input[{line}].{}", COLUMNS[k]), format!("not a number: `{s}`"))
                            .into()
                    })
                })
                .transpose()
        };
        rows.push(MetricPoint {
            snr_db: num(0)?.ok_or_else(|| Error::config(format!("input[{line}].snr_db"), "missing"))?,
            metric: get(1).map(str::parse).transpose()?.unwrap_or(Metric::Aser),
            mode: get(2).map(str::parse).transpose()?.unwrap_or(Mode::Analytic),
            value: num(3)?,
            mc_mean: num(4)?,
            mc_stderr: num(5)?,
            z_score: num(6)?,
            series_terms: num(7)?.map(|v| v as usize),
            condition_estimate: num(8)?,
            diversity: None,
            error: None,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::FadingParams;

    #[test]
    fn snr_grid_parsing() {
        assert_eq!(parse_snr_grid("0:30:2").unwrap().len(), 16);
        assert_eq!(parse_snr_grid("0:1:0.1").unwrap()[3], 0.3);
        assert_eq!(parse_snr_grid("7.5").unwrap(), vec![7.5]);
        for bad in ["", "1:2", "0:10:0", "10:0:1", "a:b:c", "0:inf:1"] {
            assert!(parse_snr_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let spec = SweepSpec {
            metric: Metric::Aser,
            snr_db: vec![0.0, 5.0, 10.0],
            mode: Mode::Analytic,
            trials: 0,
            seed: 0,
            config: SystemConfig::symmetric(2, 1.0, FadingParams::normalized(1.0, 0.9).unwrap()),
            input: None,
        };
        let rows = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("snr_db,metric,mode,value,mc_mean,mc_stderr,z_score,series_terms,condition_estimate\n"));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back, rows);
    }
}
