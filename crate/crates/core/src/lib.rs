//! Performance analysis of decode-and-forward relay selection when the
//! selection decision is made on outdated channel estimates and every
//! estimate carries an estimation error.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfn`]: special functions (incomplete gamma, Bessel J0, exponential
//!   integral, Gaussian Q and its exponential-polynomial approximation,
//!   Marcum Q1) plus series controls.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration used by the oracles.
//! - [`channel`]: model parameters, per-link derived constants and the
//!   correlated channel sampler.
//! - [`analytic`]: closed-form series for outage probability, average symbol
//!   error rate and the average-capacity lower bound, each with an
//!   independent quadrature oracle.
//! - [`montecarlo`]: reproducible, parallel simulation of the selection
//!   protocol.
//! - [`diversity`]: finite-SNR diversity order from metric sweeps.
//! - [`cli`]: sweep, figure reproduction and validation drivers behind the
//!   `relaysel` binary.

// `!(x >= 0.0)` is how argument checks reject NaN along with negatives.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod diversity;
mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod specfn;

pub use error::{Error, Result};
