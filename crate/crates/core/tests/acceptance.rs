//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails other than those listed in
//! [`KNOWN_RED`].

mod common;

use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use common::golden;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaysel::analytic::{oracle, AserMethod, DecodingSet, Model};
use relaysel::channel::{FadingParams, SystemConfig};
use relaysel::cli::sweep::read_csv;
use relaysel::diversity::{aser_sweep, fitted_slope, SweepCurve};
use relaysel::montecarlo::{simulate_capacity, simulate_outage, simulate_ser};
use relaysel::specfn::SeriesControl;

/// Criteria that fail for a documented reason. The run still fails if one of
/// these starts passing, so the list cannot go stale.
const KNOWN_RED: &[u32] = &[5];

const BIN: &str = env!("CARGO_BIN_EXE_relaysel");

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn sym(relays: usize, db: f64, rho_e: f64, rho_f: f64) -> SystemConfig {
    SystemConfig::symmetric(relays, 1.0, FadingParams::normalized(rho_e, rho_f).unwrap()).with_power_db(db)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ctrl = SeriesControl::default();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let relays = rng.random_range(1..=5);
        let cfg = common::random_config(&mut rng, relays);
        let (d, m) = common::random_pick(&mut rng, relays);
        let model = Model::new(&cfg).unwrap();
        let s = model.outage_conditional(d, m, &ctrl).unwrap();
        let q = oracle::outage_conditional_quadrature(d, m, &cfg).unwrap();
        worst = worst.max((s - q).abs());
    }
    let t = start.elapsed();
    verdict(
        worst < 1e-6 && t < Duration::from_secs(60),
        format!("max |series - quadrature| = {worst:.2e} over 50 sets in {:.1} s", t.as_secs_f64()),
    )
}

fn analytic_vs_simulation() -> Verdict {
    let start = Instant::now();
    let ctrl = SeriesControl::default();
    let trials = 1_000_000;
    let mut worst: f64 = 0.0;
    for (i, db) in [5.0, 10.0, 15.0, 20.0].into_iter().enumerate() {
        let cfg = sym(4, db, 1.0, 0.9);
        let model = Model::new(&cfg).unwrap();
        let seed = 100 + i as u64;
        let z = [
            simulate_outage(&cfg, trials, seed).unwrap().z_score(model.outage(&ctrl).unwrap().value),
            simulate_ser(&cfg, trials, seed)
                .unwrap()
                .z_score(model.aser(&ctrl, AserMethod::Exact).unwrap().value),
            simulate_capacity(&cfg, trials, seed).unwrap().z_score(model.capacity(&ctrl).unwrap().value),
        ];
        worst = z.into_iter().fold(worst, f64::max);
    }
    let t = start.elapsed();
    verdict(
        worst < 3.0 && t < Duration::from_secs(300),
        format!("max z = {worst:.2} over 4 SNRs x 3 metrics in {:.1} s", t.as_secs_f64()),
    )
}

fn symmetric_vs_general() -> Verdict {
    let ctrl = SeriesControl::default();
    let mut worst: f64 = 0.0;
    for relays in 1..=5 {
        for (rho_e, rho_f) in [(1.0, 0.9), (0.95, 0.8), (1.0, 1.0)] {
            let model = Model::new(&sym(relays, 10.0, rho_e, rho_f)).unwrap();
            let pairs = [
                (model.outage_general(&ctrl), model.outage_symmetric(&ctrl)),
                (
                    model.aser_general(&ctrl, AserMethod::Exact),
                    model.aser_symmetric(&ctrl, AserMethod::Exact),
                ),
                (model.capacity_general(&ctrl), model.capacity_symmetric(&ctrl)),
            ];
            for (g, s) in pairs {
                worst = worst.max(rel(g.unwrap().value, s.unwrap().value));
            }
        }
    }
    verdict(worst < 1e-10, format!("max relative gap = {worst:.2e} for M = 1..5"))
}

fn slope(cfg: &SystemConfig, lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| lo + step * i as f64).collect();
    let curve = aser_sweep(cfg, &grid, &SeriesControl::default(), AserMethod::Exact).unwrap();
    fitted_slope(&curve, lo, hi).unwrap()
}

fn diversity_orders() -> Verdict {
    let outdated: Vec<f64> = [2, 3, 4].iter().map(|&m| slope(&sym(m, 0.0, 1.0, 0.9), 25.0, 35.0, 1.0)).collect();
    let spread = outdated.iter().cloned().fold(f64::MIN, f64::max) - outdated.iter().cloned().fold(f64::MAX, f64::min);
    let a = outdated.iter().all(|s| (0.85..=1.15).contains(s)) && spread <= 0.1;
    let full = slope(&sym(3, 0.0, 1.0, 1.0), 25.0, 35.0, 1.0);
    let b = (2.7..=3.3).contains(&full);
    let floor = slope(&sym(3, 0.0, 0.99, 0.9), 44.0, 46.0, 1.0);
    let c = floor < 0.2;
    verdict(
        a && b && c,
        format!(
            "(a) outdated slopes {:.3}/{:.3}/{:.3} (b) fresh M=3 slope {full:.3} (c) slope at 45 dB with rho_e=0.99 {floor:.3}",
            outdated[0], outdated[1], outdated[2]
        ),
    )
}

fn floors_and_ceilings() -> Verdict {
    let ctrl = SeriesControl::default();
    let mut ratio_min = f64::MAX;
    let mut gain_max: f64 = 0.0;
    let mut parts = Vec::new();
    for rho_e in [0.9, 0.95, 0.99] {
        let at = |db| Model::new(&sym(2, db, rho_e, 0.9)).unwrap();
        let (lo, hi) = (at(30.0), at(40.0));
        let ratio = hi.aser(&ctrl, AserMethod::Exact).unwrap().value / lo.aser(&ctrl, AserMethod::Exact).unwrap().value;
        let gain = hi.capacity(&ctrl).unwrap().value - lo.capacity(&ctrl).unwrap().value;
        ratio_min = ratio_min.min(ratio);
        gain_max = gain_max.max(gain);
        parts.push(format!("rho_e={rho_e}: ratio {ratio:.3}, gain {gain:.3}"));
    }
    verdict(ratio_min > 0.9 && gain_max < 0.05, parts.join("; "))
}

fn degenerate_branch() -> Verdict {
    let ctrl = SeriesControl::default();
    let mut worst: f64 = 0.0;
    let mut limit: f64 = 0.0;
    for relays in 1..=5 {
        let cfg = sym(relays, 8.0, 1.0, 1.0);
        let model = Model::new(&cfg).unwrap();
        let lambda = cfg.relay_params()[0].lambda;
        let r = cfg.threshold();
        let closed: f64 = DecodingSet::all(relays)
            .map(|d| {
                relaysel::analytic::prob_decoding_set(&cfg, d).unwrap()
                    * (-(-lambda * r).exp_m1()).powi(d.len() as i32)
            })
            .sum();
        let exact = model.outage(&ctrl).unwrap().value;
        worst = worst.max((exact - closed).abs());
        let near = Model::new(&sym(relays, 8.0, 1.0, 0.9999)).unwrap().outage(&ctrl).unwrap().value;
        limit = limit.max((near - closed).abs());
    }
    verdict(
        worst < 1e-12 && limit < 1e-4,
        format!("order statistics gap {worst:.2e}; rho_f=0.9999 gap {limit:.2e}"),
    )
}

fn golden_suite() -> Verdict {
    let cases = golden::cases();
    let failed: Vec<&str> = cases.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    let grid = golden::marcum_grid_error();
    verdict(
        failed.is_empty() && grid < 1e-9,
        format!("{} cases, failed {:?}; Marcum grid error {grid:.2e}", cases.len(), failed),
    )
}

fn sweep_bytes(out: &Path) -> Vec<u8> {
    let status = Command::new(BIN)
        .args(["sweep", "--mode", "both", "--seed", "42", "--out"])
        .arg(out)
        .status()
        .unwrap();
    assert!(status.success());
    std::fs::read(out).unwrap()
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let a = sweep_bytes(&dir.path().join("a.csv"));
    let b = sweep_bytes(&dir.path().join("b.csv"));
    verdict(a == b && !a.is_empty(), format!("{} bytes, identical: {}", a.len(), a == b))
}

fn figure_one() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(BIN)
        .args(["reproduce", "--figure", "1", "--out"])
        .arg(dir.path())
        .stderr(Stdio::null())
        .status()
        .unwrap();
    if !status.success() {
        return verdict(false, format!("reproduce exited with {status}"));
    }
    // curves in ρ_f order 0.6, 0.7, 0.8, 0.9, 1
    let curves: Vec<Vec<(f64, f64)>> = ["0.6", "0.7", "0.8", "0.9", "1"]
        .iter()
        .map(|f| {
            let path = dir.path().join(format!("fig1_M4_rho_e_1_rho_f_{f}.csv"));
            let rows = read_csv(std::fs::File::open(path).unwrap()).unwrap();
            rows.iter().map(|r| (r.snr_db, r.value.unwrap())).collect()
        })
        .collect();
    let points = curves[0].len();
    let ordered = (0..points).all(|i| {
        let v: Vec<f64> = curves.iter().map(|c| c[i].1).collect();
        v[4] <= v.iter().cloned().fold(f64::MAX, f64::min) && v[0] >= v.iter().cloned().fold(f64::MIN, f64::max)
    });
    let best = SweepCurve::new(curves[4].clone()).unwrap();
    let last = curves[4][points - 1].0;
    let terminal = fitted_slope(&best, last - 10.0, last).unwrap();
    verdict(
        ordered && (3.7..=4.3).contains(&terminal),
        format!("ordering held at all {points} SNRs: {ordered}; rho_f=1 terminal slope {terminal:.3}"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("analytic vs Monte Carlo", analytic_vs_simulation),
        ("symmetric vs general", symmetric_vs_general),
        ("diversity orders", diversity_orders),
        ("error floor and capacity ceiling", floors_and_ceilings),
        ("degenerate branch", degenerate_branch),
        ("special-function goldens", golden_suite),
        ("sweep determinism", determinism),
        ("figure 1 reproduction", figure_one),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i as u32 + 1;
        let v = run();
        let tag = match (v.passed, KNOWN_RED.contains(&id)) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (true, true) => "PASS (expected to fail)",
            (false, false) => "FAIL",
        };
        println!("criterion {id} {tag}: {name}: {}", v.detail);
        if v.passed == KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
