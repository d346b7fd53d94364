//! C interface to `relaysel`.
//!
//! Configurations live behind an opaque [`RelayselConfig`] handle. Every
//! fallible call returns a [`RelayselStatus`]; on failure a message is kept
//! per thread and can be read with [`relaysel_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use relaysel::analytic::{self, AserMethod, MetricResult, Model};
use relaysel::channel::{FadingParams, LambdaConvention, SystemConfig};
use relaysel::cli::ConfigFile;
use relaysel::montecarlo;
use relaysel::specfn::SeriesControl;
use relaysel::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayselStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    NumericalError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayselConvention {
    Derived = 0,
    Paper = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayselMetric {
    Outage = 0,
    Aser = 1,
    Capacity = 2,
}

/// Analytic value with its series diagnostics.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RelayselResult {
    pub value: f64,
    pub series_terms: u64,
    pub condition_estimate: f64,
}

/// Monte-Carlo mean and standard error.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RelayselEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Opaque system configuration.
pub struct RelayselConfig {
    inner: SystemConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RelayselStatus {
    match e {
        Error::InvalidArgument { .. } => RelayselStatus::InvalidArgument,
        Error::Config { .. } => RelayselStatus::ConfigError,
        _ if e.is_numerical() => RelayselStatus::NumericalError,
        _ => RelayselStatus::InvalidArgument,
    }
}

fn guard<F>(f: F) -> RelayselStatus
where
    F: FnOnce() -> Result<(), (RelayselStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RelayselStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            RelayselStatus::Panic
        }
    }
}

fn lift<T>(r: relaysel::Result<T>) -> Result<T, (RelayselStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (RelayselStatus, String) {
    (RelayselStatus::NullPointer, format!("`{what}` is null"))
}

/// # Safety
/// `cfg` must be null or a live handle from this library.
unsafe fn config_ref<'a>(cfg: *const RelayselConfig) -> Result<&'a SystemConfig, (RelayselStatus, String)> {
    cfg.as_ref().map(|c| &c.inner).ok_or_else(|| null("cfg"))
}

fn publish(config: SystemConfig, out: *mut *mut RelayselConfig) -> Result<(), (RelayselStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    lift(config.validate())?;
    let handle = Box::into_raw(Box::new(RelayselConfig { inner: config }));
    // SAFETY: checked non-null above; the caller provides writable storage.
    unsafe { *out = handle };
    Ok(())
}

/// Message of the last failed call on this thread, or null if none failed.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn relaysel_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn relaysel_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `relays` identical relays with unit-variance estimates, BPSK and `R = 1`.
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn relaysel_config_new_symmetric(
    relays: u32,
    power_db: f64,
    rho_e: f64,
    rho_f: f64,
    out: *mut *mut RelayselConfig,
) -> RelayselStatus {
    guard(|| {
        let link = lift(FadingParams::normalized(rho_e, rho_f))?;
        let config = SystemConfig::symmetric(relays as usize, 1.0, link).with_power_db(power_db);
        publish(config, out)
    })
}

/// Parse a JSON configuration document.
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` as in
/// [`relaysel_config_new_symmetric`].
#[no_mangle]
pub unsafe extern "C" fn relaysel_config_from_json(
    json: *const c_char,
    out: *mut *mut RelayselConfig,
) -> RelayselStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (RelayselStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let config = lift(ConfigFile::parse(text).and_then(|f| f.to_system()))?;
        publish(config, out)
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn relaysel_config_free(cfg: *mut RelayselConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn relaysel_config_set_power_db(cfg: *mut RelayselConfig, power_db: f64) -> RelayselStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(|| null("cfg"))?;
        let next = c.inner.with_power_db(power_db);
        lift(next.validate())?;
        c.inner = next;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn relaysel_config_set_convention(
    cfg: *mut RelayselConfig,
    convention: RelayselConvention,
) -> RelayselStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(|| null("cfg"))?;
        c.inner.lambda_convention = match convention {
            RelayselConvention::Derived => LambdaConvention::Derived,
            RelayselConvention::Paper => LambdaConvention::Paper,
        };
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn relaysel_config_relays(cfg: *const RelayselConfig, out: *mut u32) -> RelayselStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.relays() as u32;
        Ok(())
    })
}

unsafe fn analytic_call<F>(cfg: *const RelayselConfig, out: *mut RelayselResult, f: F) -> RelayselStatus
where
    F: FnOnce(&Model, &SeriesControl) -> relaysel::Result<MetricResult>,
{
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let model = lift(Model::new(c))?;
        let r = lift(f(&model, &SeriesControl::default()))?;
        *out = RelayselResult {
            value: r.value,
            series_terms: r.series_terms_used as u64,
            condition_estimate: r.condition_estimate,
        };
        Ok(())
    })
}

/// End-to-end outage probability.
///
/// # Safety
/// `cfg` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn relaysel_outage(cfg: *const RelayselConfig, out: *mut RelayselResult) -> RelayselStatus {
    analytic_call(cfg, out, |m, ctrl| m.outage(ctrl))
}

/// Average symbol error rate; `n_a = 0` uses the exact Q function, otherwise
/// the exponential approximation of that order.
///
/// # Safety
/// `cfg` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn relaysel_aser(
    cfg: *const RelayselConfig,
    n_a: u32,
    out: *mut RelayselResult,
) -> RelayselStatus {
    let method = match n_a {
        0 => AserMethod::Exact,
        n => AserMethod::QApprox { n_a: n },
    };
    analytic_call(cfg, out, |m, ctrl| m.aser(ctrl, method))
}

/// Average of the capacity lower bound, bits/s/Hz.
///
/// # Safety
/// `cfg` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn relaysel_capacity(cfg: *const RelayselConfig, out: *mut RelayselResult) -> RelayselStatus {
    analytic_call(cfg, out, |m, ctrl| m.capacity(ctrl))
}

/// Probability that exactly the relays in bit mask `set` decode.
///
/// # Safety
/// `cfg` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn relaysel_decoding_set_probability(
    cfg: *const RelayselConfig,
    set: u32,
    out: *mut f64,
) -> RelayselStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(analytic::prob_decoding_set(c, analytic::DecodingSet::from_bits(set)))?;
        Ok(())
    })
}

/// Monte-Carlo estimate of `metric`. Deterministic in `seed`.
///
/// # Safety
/// `cfg` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn relaysel_simulate(
    cfg: *const RelayselConfig,
    metric: RelayselMetric,
    trials: u64,
    seed: u64,
    out: *mut RelayselEstimate,
) -> RelayselStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let est = lift(match metric {
            RelayselMetric::Outage => montecarlo::simulate_outage(c, trials, seed),
            RelayselMetric::Aser => montecarlo::simulate_ser(c, trials, seed),
            RelayselMetric::Capacity => montecarlo::simulate_capacity(c, trials, seed),
        })?;
        *out = RelayselEstimate {
            mean: est.mean,
            std_error: est.std_error,
            trials: est.trials,
        };
        Ok(())
    })
}
