use std::ffi::{CStr, CString};
use std::ptr;

use relaysel_ffi::*;

fn last_error() -> String {
    let p = relaysel_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn symmetric(relays: u32, db: f64, rho_e: f64, rho_f: f64) -> *mut RelayselConfig {
    let mut cfg = ptr::null_mut();
    let s = unsafe { relaysel_config_new_symmetric(relays, db, rho_e, rho_f, &mut cfg) };
    assert_eq!(s, RelayselStatus::Ok);
    cfg
}

#[test]
fn analytic_values_match_the_library() {
    let cfg = symmetric(4, 5.0, 1.0, 0.9);
    let mut r = RelayselResult::default();
    unsafe {
        assert_eq!(relaysel_outage(cfg, &mut r), RelayselStatus::Ok);
        assert!((r.value - 0.5552941460180663).abs() < 1e-12);
        assert!(r.series_terms > 0 && r.condition_estimate >= 1.0);
        assert_eq!(relaysel_aser(cfg, 0, &mut r), RelayselStatus::Ok);
        assert!((r.value - 0.015193374956838746).abs() < 1e-12);
        assert_eq!(relaysel_capacity(cfg, &mut r), RelayselStatus::Ok);
        assert!((r.value - 0.8675113817031698).abs() < 1e-12);
        let mut m = 0;
        assert_eq!(relaysel_config_relays(cfg, &mut m), RelayselStatus::Ok);
        assert_eq!(m, 4);
        let mut total = 0.0;
        for set in 0..16 {
            let mut p = 0.0;
            assert_eq!(relaysel_decoding_set_probability(cfg, set, &mut p), RelayselStatus::Ok);
            total += p;
        }
        assert!((total - 1.0).abs() < 1e-14);
        relaysel_config_free(cfg);
    }
}

#[test]
fn json_and_setters() {
    let json = CString::new(r#"{"M": 2, "power_db": 10, "rho_e": 0.9, "rho_f": 0.8}"#).unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(relaysel_config_from_json(json.as_ptr(), &mut cfg), RelayselStatus::Ok);
        let mut a = RelayselResult::default();
        let mut b = RelayselResult::default();
        relaysel_outage(cfg, &mut a);
        assert_eq!(relaysel_config_set_power_db(cfg, 20.0), RelayselStatus::Ok);
        relaysel_outage(cfg, &mut b);
        assert!(b.value < a.value);
        assert_eq!(relaysel_config_set_convention(cfg, RelayselConvention::Paper), RelayselStatus::Ok);
        relaysel_outage(cfg, &mut a);
        assert_ne!(a.value, b.value);
        assert_eq!(relaysel_config_set_power_db(cfg, f64::NAN), RelayselStatus::ConfigError);
        relaysel_config_free(cfg);
    }
}

#[test]
fn simulation_is_deterministic() {
    let cfg = symmetric(3, 10.0, 1.0, 0.9);
    let mut a = RelayselEstimate::default();
    let mut b = RelayselEstimate::default();
    unsafe {
        assert_eq!(relaysel_simulate(cfg, RelayselMetric::Outage, 20_000, 7, &mut a), RelayselStatus::Ok);
        assert_eq!(relaysel_simulate(cfg, RelayselMetric::Outage, 20_000, 7, &mut b), RelayselStatus::Ok);
        assert_eq!(a, b);
        assert_eq!(a.trials, 20_000);
        let mut r = RelayselResult::default();
        relaysel_outage(cfg, &mut r);
        assert!((a.mean - r.value).abs() < 5.0 * a.std_error);
        assert_eq!(
            relaysel_simulate(cfg, RelayselMetric::Capacity, 0, 7, &mut a),
            RelayselStatus::InvalidArgument
        );
        assert!(last_error().contains("trials"));
        relaysel_config_free(cfg);
    }
}

#[test]
fn errors_and_null_handling() {
    let mut cfg = ptr::null_mut();
    unsafe {
        let s = relaysel_config_new_symmetric(2, 10.0, 1.0, 1.5, &mut cfg);
        assert_eq!(s, RelayselStatus::ConfigError);
        assert!(cfg.is_null());
        assert!(last_error().contains("rho_f"));
        let s = relaysel_config_new_symmetric(0, 10.0, 1.0, 0.5, &mut cfg);
        assert_eq!(s, RelayselStatus::ConfigError);

        let bad = CString::new(r#"{"M": 2, "power_db": 1, "power_linear": 1}"#).unwrap();
        assert_eq!(relaysel_config_from_json(bad.as_ptr(), &mut cfg), RelayselStatus::ConfigError);
        assert!(last_error().contains("power_db"));
        assert_eq!(relaysel_config_from_json(ptr::null(), &mut cfg), RelayselStatus::NullPointer);
        assert_eq!(
            relaysel_config_new_symmetric(2, 10.0, 1.0, 0.5, ptr::null_mut()),
            RelayselStatus::NullPointer
        );

        let mut r = RelayselResult::default();
        assert_eq!(relaysel_outage(ptr::null(), &mut r), RelayselStatus::NullPointer);
        let ok = symmetric(2, 10.0, 1.0, 0.5);
        assert_eq!(relaysel_outage(ok, ptr::null_mut()), RelayselStatus::NullPointer);
        let mut p = 0.0;
        assert_eq!(relaysel_decoding_set_probability(ok, 0b100, &mut p), RelayselStatus::InvalidArgument);
        relaysel_config_free(ok);
        relaysel_config_free(ptr::null_mut());
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(relaysel_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
