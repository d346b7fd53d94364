use thiserror::Error;

/// Errors produced by the analysis, simulation and configuration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A function argument violated its documented domain.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// A configuration document or value was rejected. `path` names the offending field.
    #[error("configuration error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    /// A series did not reach its truncation tolerance within the term budget.
    #[error("series `{series}` did not converge within {k_max} terms (tail bound {tail:e})")]
    SeriesDiverged {
        series: &'static str,
        k_max: usize,
        tail: f64,
    },

    /// Adaptive quadrature could not meet its tolerance.
    #[error("quadrature did not converge: estimated error {error:e} after {evaluations} evaluations")]
    Quadrature { error: f64, evaluations: usize },
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of numerical machinery as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SeriesDiverged { .. } | Error::Quadrature { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
