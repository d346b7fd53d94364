//! Command-line drivers.
//!
//! Exit status: 0 on success, 1 when validation finds a failing check,
//! 2 for configuration and I/O errors, 3 for numerical failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub mod config;
pub mod reproduce;
pub mod sweep;
pub mod validate;

pub use config::ConfigFile;
pub use reproduce::{figure, reproduce_figure, Figure};
pub use sweep::{parse_snr_grid, run_sweep, Metric, MetricPoint, Mode, SweepSpec};
pub use validate::{validate, Report, ValidateOptions};

use crate::channel::{LambdaConvention, LinkParams, SystemConfig};
use crate::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("validation failed")]
    Validation,
    #[error("{0} grid points failed")]
    Points(usize),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation => 1,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Points(_) => 3,
            _ => 2,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io {
            path: "<stdout>".into(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "relaysel", version, about = "Relay selection with outdated and imperfect channel estimates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON configuration; defaults to M=4, ρ_e=1, ρ_f=0.9, 10 dB.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override the configuration's λ convention (`paper` or `derived`).
    #[arg(long, value_name = "NAME")]
    pub lambda_convention: Option<LambdaConvention>,
}

impl ConfigArgs {
    pub fn load(&self) -> Result<SystemConfig, CliError> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let mut config = file.to_system()?;
        if let Some(c) = self.lambda_convention {
            config.lambda_convention = c;
        }
        Ok(config)
    }
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value = "analytic")]
    pub mode: Mode,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one metric over an SNR grid and write CSV.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "outage")]
        metric: Metric,
        /// Grid in dB as START:STOP:STEP, or a single value.
        #[arg(long, value_name = "START:STOP:STEP", default_value = "0:30:2")]
        snr_db: String,
        #[command(flatten)]
        mc: McArgs,
        /// Error-rate sweep CSV to differentiate (diversity metric only).
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Write the curves of a reference figure, one CSV per curve.
    Reproduce {
        #[arg(long, value_name = "N")]
        figure: u32,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Run the cross-oracle suite on a configuration.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 200_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the report as JSON.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, hide = true, value_name = "FACTOR")]
        corrupt_lambda: Option<f64>,
    },
    /// Print the derived per-link constants of a configuration.
    Info {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
pub struct LinkInfo {
    pub threshold: f64,
    pub power: f64,
    pub lambda_convention: LambdaConvention,
    pub source_links: Vec<LinkParams>,
    pub relay_links: Vec<LinkParams>,
}

pub fn info(config: &SystemConfig) -> crate::Result<LinkInfo> {
    config.validate()?;
    Ok(LinkInfo {
        threshold: config.threshold(),
        power: config.power,
        lambda_convention: config.lambda_convention,
        source_links: config.source_params(),
        relay_links: config.relay_params(),
    })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            config,
            metric,
            snr_db,
            mc,
            input,
            out,
        } => {
            let config = config.load()?;
            let input = match &input {
                Some(p) if metric == Metric::Diversity => {
                    Some(sweep::read_csv(File::open(p).map_err(|e| CliError::io(p, e))?)?)
                }
                Some(_) => return Err(Error::config("input", "only the diversity metric reads an input sweep").into()),
                None => None,
            };
            let spec = SweepSpec {
                metric,
                snr_db: if input.is_some() { Vec::new() } else { parse_snr_grid(&snr_db)? },
                mode: mc.mode,
                trials: mc.trials,
                seed: mc.seed,
                config,
                input,
            };
            let rows = run_sweep(&spec)?;
            sweep::write_csv(&rows, output(&out)?)?;
            let failed: Vec<&MetricPoint> = rows.iter().filter(|r| r.error.is_some()).collect();
            for r in &failed {
                eprintln!("{} dB: {}", r.snr_db, r.error.as_deref().unwrap_or_default());
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Points(failed.len()))
            }
        }
        Command::Reproduce { figure, mc, out } => {
            for c in reproduce_figure(figure, &out, mc.mode, mc.trials, mc.seed)? {
                eprintln!("wrote {}", c.path.display());
            }
            Ok(())
        }
        Command::Validate {
            config,
            trials,
            seed,
            out,
            corrupt_lambda,
        } => {
            let config = config.load()?;
            let opts = ValidateOptions {
                trials,
                seed,
                corrupt_lambda,
            };
            let report = validate(&config, &opts)?;
            println!("{report}");
            if let Some(p) = &out {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                std::fs::write(p, text).map_err(|e| CliError::io(p, e))?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Validation)
            }
        }
        Command::Info { config, out } => {
            let info = info(&config.load()?)?;
            let mut w = output(&out)?;
            serde_json::to_writer_pretty(&mut w, &info).map_err(io::Error::from)?;
            writeln!(w)?;
            w.flush()?;
            Ok(())
        }
    }
}

/// Parse `args`, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        // a closed downstream pipe (`| head`) is not an error
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(CliError::Csv(e)) if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe) => 0,
        Err(e) => {
            if !matches!(e, CliError::Validation) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
