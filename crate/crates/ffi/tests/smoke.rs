//! End-to-end exercise of the C ABI: handle lifecycles, status codes,
//! error reporting, and determinism of the exported text formats.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use laika_spine_ffi::*;

/// Takes ownership of an exported C string and frees it.
unsafe fn claim_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .expect("exported strings are UTF-8")
        .to_string();
    unsafe { laika_spine_string_free(ptr) };
    text
}

unsafe fn last_error() -> String {
    unsafe { CStr::from_ptr(laika_spine_last_error()) }
        .to_str()
        .expect("error text is UTF-8")
        .to_string()
}

unsafe fn config_from(json: &str) -> *mut LaikaSpineConfig {
    let json = CString::new(json).unwrap();
    let mut config = ptr::null_mut();
    let status = unsafe { laika_spine_config_from_json(json.as_ptr(), &mut config) };
    assert_eq!(status, LaikaSpineStatus::Ok, "{}", unsafe { last_error() });
    config
}

#[test]
fn version_is_a_static_semver_string() {
    let version = unsafe { CStr::from_ptr(laika_spine_version()) };
    let text = version.to_str().expect("version is UTF-8");
    assert!(text.split('.').count() >= 2, "unexpected version {text}");
}

#[test]
fn config_round_trips_through_json_without_loss() {
    unsafe {
        let mut config = ptr::null_mut();
        assert_eq!(
            laika_spine_config_default(&mut config),
            LaikaSpineStatus::Ok
        );

        let mut first = ptr::null_mut();
        assert_eq!(
            laika_spine_config_to_json(config, &mut first),
            LaikaSpineStatus::Ok
        );
        let first = claim_string(first);
        assert!(first.contains("\"totalMassKg\""));
        assert!(first.contains("\"retractionFraction\": 0.8"));

        // Parsing the echoed document back must reproduce it byte for byte.
        let reparsed = config_from(&first);
        let mut second = ptr::null_mut();
        assert_eq!(
            laika_spine_config_to_json(reparsed, &mut second),
            LaikaSpineStatus::Ok
        );
        let second = claim_string(second);
        assert_eq!(first, second);

        laika_spine_config_free(reparsed);
        laika_spine_config_free(config);
    }
}

#[test]
fn invalid_inputs_map_to_distinct_statuses() {
    unsafe {
        let mut config = ptr::null_mut();

        assert_eq!(
            laika_spine_config_from_json(ptr::null(), &mut config),
            LaikaSpineStatus::NullArgument
        );

        let not_utf8 = CString::new([0xFFu8, 0xFE].as_slice()).unwrap();
        assert_eq!(
            laika_spine_config_from_json(not_utf8.as_ptr(), &mut config),
            LaikaSpineStatus::InvalidUtf8
        );

        let syntax = CString::new("{ not json").unwrap();
        assert_eq!(
            laika_spine_config_from_json(syntax.as_ptr(), &mut config),
            LaikaSpineStatus::InvalidConfig
        );
        assert!(!last_error().is_empty());

        let unknown_key = CString::new(r#"{"noSuchKnob": 1}"#).unwrap();
        assert_eq!(
            laika_spine_config_from_json(unknown_key.as_ptr(), &mut config),
            LaikaSpineStatus::InvalidConfig
        );
        assert!(last_error().contains("noSuchKnob"));

        let bad_value = CString::new(r#"{"totalMassKg": -2}"#).unwrap();
        assert_eq!(
            laika_spine_config_from_json(bad_value.as_ptr(), &mut config),
            LaikaSpineStatus::InvalidConfig
        );
        assert!(last_error().contains("totalMassKg"));

        // Null handles and null out pointers are rejected, never followed.
        let mut lifted = false;
        assert_eq!(
            laika_spine_run_lifted(ptr::null(), &mut lifted),
            LaikaSpineStatus::NullArgument
        );
        assert_eq!(
            laika_spine_config_to_json(ptr::null(), &mut ptr::null_mut()),
            LaikaSpineStatus::NullArgument
        );

        // Frees tolerate null.
        laika_spine_config_free(ptr::null_mut());
        laika_spine_run_free(ptr::null_mut());
        laika_spine_sweep_free(ptr::null_mut());
        laika_spine_string_free(ptr::null_mut());
    }
}

#[test]
fn default_run_lifts_the_target_foot_deterministically() {
    unsafe {
        let config = config_from("{}");

        let run_once = || {
            let mut run = ptr::null_mut();
            let status = laika_spine_run_foot_lift(config, &mut run);
            assert_eq!(status, LaikaSpineStatus::Ok, "{}", last_error());
            run
        };
        let run = run_once();

        let mut lifted = false;
        assert_eq!(
            laika_spine_run_lifted(run, &mut lifted),
            LaikaSpineStatus::Ok
        );
        assert!(lifted);

        let mut letter: c_char = 0;
        assert_eq!(
            laika_spine_run_lifted_foot(run, &mut letter),
            LaikaSpineStatus::Ok
        );
        assert_eq!(letter as u8 as char, 'A');

        let mut angle = 0.0;
        assert_eq!(
            laika_spine_run_lift_angle_rad(run, &mut angle),
            LaikaSpineStatus::Ok
        );
        assert!((0.3..0.7).contains(&angle), "angle {angle}");

        let mut time = 0.0;
        assert_eq!(
            laika_spine_run_lift_time_s(run, &mut time),
            LaikaSpineStatus::Ok
        );
        assert!((10.0..30.0).contains(&time), "time {time}");

        let mut samples = 0usize;
        assert_eq!(
            laika_spine_run_sample_count(run, &mut samples),
            LaikaSpineStatus::Ok
        );
        assert!(samples > 100, "samples {samples}");

        let mut csv = ptr::null_mut();
        assert_eq!(
            laika_spine_run_trace_csv(run, &mut csv),
            LaikaSpineStatus::Ok
        );
        let csv = claim_string(csv);
        assert!(csv.starts_with(
            "t_s,theta_rad,footA_z_m,footB_z_m,footC_z_m,footD_z_m,contactA,contactB,contactC,contactD\n"
        ));
        assert_eq!(csv.lines().count(), samples + 1);

        // A second run from the same configuration reproduces the trace
        // byte for byte.
        let repeat = run_once();
        let mut repeat_csv = ptr::null_mut();
        assert_eq!(
            laika_spine_run_trace_csv(repeat, &mut repeat_csv),
            LaikaSpineStatus::Ok
        );
        assert_eq!(claim_string(repeat_csv), csv);

        laika_spine_run_free(repeat);
        laika_spine_run_free(run);
        laika_spine_config_free(config);
    }
}

#[test]
fn runs_without_a_lift_report_no_lift() {
    unsafe {
        // A rotation ramp that stops at 0.1 rad never unloads a foot.
        let config = config_from(r#"{"maxAngleRad": 0.1, "rampDurationS": 2.0}"#);
        let mut run = ptr::null_mut();
        let status = laika_spine_run_foot_lift(config, &mut run);
        assert_eq!(status, LaikaSpineStatus::Ok, "{}", last_error());

        let mut lifted = true;
        assert_eq!(
            laika_spine_run_lifted(run, &mut lifted),
            LaikaSpineStatus::Ok
        );
        assert!(!lifted);

        let mut angle = 0.0;
        assert_eq!(
            laika_spine_run_lift_angle_rad(run, &mut angle),
            LaikaSpineStatus::NoLift
        );
        let mut letter: c_char = 0;
        assert_eq!(
            laika_spine_run_lifted_foot(run, &mut letter),
            LaikaSpineStatus::NoLift
        );

        laika_spine_run_free(run);
        laika_spine_config_free(config);
    }
}

#[test]
fn sweep_reports_twenty_runs_and_a_ranking() {
    unsafe {
        let config = config_from("{}");
        let mut sweep = ptr::null_mut();
        let status = laika_spine_sweep_new(config, &mut sweep);
        assert_eq!(status, LaikaSpineStatus::Ok, "{}", last_error());

        let mut count = 0usize;
        assert_eq!(
            laika_spine_sweep_run_count(sweep, &mut count),
            LaikaSpineStatus::Ok
        );
        assert_eq!(count, 20);

        let mut best = ptr::null_mut();
        assert_eq!(
            laika_spine_sweep_best_tension(sweep, &mut best),
            LaikaSpineStatus::Ok
        );
        let best = claim_string(best);
        assert!(
            ["low", "medLow", "mean", "medHigh", "high"].contains(&best.as_str()),
            "best tension {best}"
        );

        let mut report = ptr::null_mut();
        assert_eq!(
            laika_spine_sweep_report_json(sweep, &mut report),
            LaikaSpineStatus::Ok
        );
        let report = claim_string(report);
        let parsed: serde_json::Value = serde_json::from_str(&report).expect("report is JSON");
        assert_eq!(parsed["runs"].as_array().map(Vec::len), Some(20));
        assert_eq!(parsed["comparison"]["bestTension"].as_str(), Some(best.as_str()));
        assert_eq!(
            parsed["comparison"]["ranking"].as_array().map(Vec::len),
            Some(5)
        );

        let mut csv = ptr::null_mut();
        assert_eq!(
            laika_spine_sweep_trace_csv(sweep, 0, &mut csv),
            LaikaSpineStatus::Ok
        );
        let csv = claim_string(csv);
        assert!(csv.starts_with("t_s,theta_rad,"));

        let mut beyond = ptr::null_mut();
        assert_eq!(
            laika_spine_sweep_trace_csv(sweep, 20, &mut beyond),
            LaikaSpineStatus::OutOfRange
        );
        assert!(last_error().contains("20"));

        laika_spine_sweep_free(sweep);
        laika_spine_config_free(config);
    }
}
