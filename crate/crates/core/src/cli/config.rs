//! JSON configuration documents.
//!
//! ```json
//! {
//!   "M": 4,
//!   "power_db": 10,
//!   "rate": 1,
//!   "rho_e": 1,
//!   "rho_f": 0.9,
//!   "relay_links": [{ "rho_f": 0.7 }, {}, {}, {}]
//! }
//! ```
//!
//! Scalar link fields apply to every link; the optional `source_links` and
//! `relay_links` arrays override them per relay. When `sigma2_h` is absent
//! each link uses `σ_h² = ρ_e`, which normalizes the estimate variance to one.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{db_to_linear, FadingParams, LambdaConvention, SystemConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkOverride {
    pub sigma2_h: Option<f64>,
    pub rho_e: Option<f64>,
    pub rho_f: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "M")]
    pub relays: usize,
    pub power_db: Option<f64>,
    pub power_linear: Option<f64>,
    #[serde(default = "one")]
    pub rate: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "two")]
    pub beta: f64,
    #[serde(default = "one")]
    pub rho_e: f64,
    #[serde(default = "one")]
    pub rho_f: f64,
    pub sigma2_h: Option<f64>,
    #[serde(default)]
    pub lambda_convention: LambdaConvention,
    pub source_links: Option<Vec<LinkOverride>>,
    pub relay_links: Option<Vec<LinkOverride>>,
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

/// Transmit power used when the document names none.
pub const DEFAULT_POWER_DB: f64 = 10.0;

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            relays: 4,
            power_db: None,
            power_linear: None,
            rate: 1.0,
            alpha: 1.0,
            beta: 2.0,
            rho_e: 1.0,
            rho_f: 0.9,
            sigma2_h: None,
            lambda_convention: LambdaConvention::Derived,
            source_links: None,
            relay_links: None,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    fn link(&self, path: String, o: &LinkOverride) -> Result<FadingParams> {
        let rho_e = o.rho_e.unwrap_or(self.rho_e);
        let p = FadingParams {
            sigma2_h: o.sigma2_h.or(self.sigma2_h).unwrap_or(rho_e),
            rho_e,
            rho_f: o.rho_f.unwrap_or(self.rho_f),
        };
        p.validate(&path)?;
        Ok(p)
    }

    fn links(&self, name: &str, overrides: &Option<Vec<LinkOverride>>) -> Result<Vec<FadingParams>> {
        let m = self.relays;
        let blank = vec![LinkOverride::default(); m];
        let list = match overrides {
            Some(v) if v.len() != m => {
                return Err(Error::config(name, format!("expected {m} entries, got {}", v.len())))
            }
            Some(v) => v,
            None => &blank,
        };
        list.iter()
            .enumerate()
            .map(|(i, o)| self.link(format!("{name}[{i}]"), o))
            .collect()
    }

    pub fn to_system(&self) -> Result<SystemConfig> {
        let power = match (self.power_db, self.power_linear) {
            (Some(_), Some(_)) => {
                return Err(Error::config("power_db", "give power_db or power_linear, not both"))
            }
            (Some(db), None) if db.is_finite() => db_to_linear(db),
            (Some(db), None) => return Err(Error::config("power_db", format!("must be finite, got {db}"))),
            (None, Some(p)) => p,
            (None, None) => db_to_linear(DEFAULT_POWER_DB),
        };
        if self.relays == 0 {
            return Err(Error::config("M", "at least one relay is required"));
        }
        let config = SystemConfig {
            power,
            rate: self.rate,
            alpha: self.alpha,
            beta: self.beta,
            source_links: self.links("source_links", &self.source_links)?,
            relay_links: self.links("relay_links", &self.relay_links)?,
            lambda_convention: self.lambda_convention,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_path(text: &str) -> String {
        match ConfigFile::parse(text).and_then(|c| c.to_system()) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_and_overrides() {
        let cfg = ConfigFile::parse(r#"{"M": 2, "power_db": 20, "rho_e": 0.9, "relay_links": [{}, {"rho_f": 0.5}]}"#)
            .unwrap()
            .to_system()
            .unwrap();
        assert!((cfg.power - 100.0).abs() < 1e-12);
        assert_eq!(cfg.relay_links[0].rho_f, 1.0);
        assert_eq!(cfg.relay_links[1].rho_f, 0.5);
        assert_eq!(cfg.source_links[1].sigma2_h, 0.9);
        assert_eq!((cfg.alpha, cfg.beta, cfg.rate), (1.0, 2.0, 1.0));
    }

    #[test]
    fn field_paths_in_errors() {
        assert_eq!(err_path(r#"{"M": 2, "power_db": 1, "power_linear": 2}"#), "power_db");
        assert_eq!(err_path(r#"{"M": 2, "relay_links": [{}, {"rho_f": 1.5}]}"#), "relay_links[1].rho_f");
        assert_eq!(err_path(r#"{"M": 2, "source_links": [{}]}"#), "source_links");
        assert_eq!(err_path(r#"{"M": 0}"#), "M");
        assert_eq!(err_path(r#"{"M": 2, "rho": 1}"#), "<document>");
        assert_eq!(err_path(r#"{"M": 2, "beta": -1}"#), "beta");
    }
}
