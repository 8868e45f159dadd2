//! C ABI over the spine simulator: opaque handles, status codes, and
//! owned C strings.
//!
//! Every function that can fail returns a [`LaikaSpineStatus`]; on failure
//! a message is stored in thread-local storage and can be read with
//! [`laika_spine_last_error`]. Handles and strings returned through `out`
//! parameters are owned by the caller and must be released with the
//! matching `_free` function.
//!
//! The generated header lives at `include/laika_spine.h` and is rebuilt on
//! every compile.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use laika_spine::config::{load_config, RunConfig};
use laika_spine::harness::{
    assess_tension_points, calibration_sweep, run_foot_lift_test, FootLiftResult,
    HardwareReference,
};
use laika_spine::model::TensionPoint;
use laika_spine::report::{build_report, Report};
use laika_spine::trace::format_trace;

/// Outcome of an API call. Anything other than `Ok` leaves a description
/// in the thread-local buffer read by `laika_spine_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaikaSpineStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The configuration document was rejected (syntax, unknown key, or
    /// out-of-range value).
    InvalidConfig = 3,
    /// The simulation could not be run to completion.
    RunFailed = 4,
    /// The queried run never produced a lift.
    NoLift = 5,
    /// An index argument was out of bounds.
    OutOfRange = 6,
    /// An internal invariant failed; the handle is still valid but the
    /// call produced nothing.
    Internal = 7,
}

/// A validated configuration document (opaque).
pub struct LaikaSpineConfig(RunConfig);

/// One completed foot-lift run (opaque).
pub struct LaikaSpineRun(FootLiftResult);

/// A completed five-point calibration sweep with its hardware comparison
/// (opaque).
pub struct LaikaSpineSweep {
    results: Vec<FootLiftResult>,
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let sanitized = message.replace('\0', " ");
    let text = CString::new(sanitized).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn fail(status: LaikaSpineStatus, message: impl Into<String>) -> LaikaSpineStatus {
    set_error(message.into());
    status
}

/// Runs a closure and converts any panic into `Internal` so unwinding
/// never crosses the C boundary.
fn guarded(body: impl FnOnce() -> LaikaSpineStatus) -> LaikaSpineStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".to_string());
            fail(LaikaSpineStatus::Internal, format!("internal panic: {text}"))
        }
    }
}

fn export_string(text: String, out: *mut *mut c_char) -> LaikaSpineStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            LaikaSpineStatus::Ok
        }
        Err(_) => fail(
            LaikaSpineStatus::Internal,
            "produced text with an interior NUL byte",
        ),
    }
}

/// Returns the library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn laika_spine_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Returns the message from the most recent failing call on this thread,
/// or an empty string if none has failed yet. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn laika_spine_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a configuration holding every default value. Never fails with
/// a valid `out` pointer.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_config_default(
    out: *mut *mut LaikaSpineConfig,
) -> LaikaSpineStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let handle = Box::new(LaikaSpineConfig(RunConfig::default()));
        unsafe { *out = Box::into_raw(handle) };
        LaikaSpineStatus::Ok
    })
}

/// Parses and validates a JSON configuration document. `json` must be a
/// NUL-terminated UTF-8 string; `{}` yields the defaults. On success the
/// new handle is written to `out` and owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_config_from_json(
    json: *const c_char,
    out: *mut *mut LaikaSpineConfig,
) -> LaikaSpineStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "json or out pointer is null");
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(text) => text,
            Err(e) => return fail(LaikaSpineStatus::InvalidUtf8, e.to_string()),
        };
        match load_config(text) {
            Ok(config) => {
                unsafe { *out = Box::into_raw(Box::new(LaikaSpineConfig(config))) };
                LaikaSpineStatus::Ok
            }
            Err(e) => fail(LaikaSpineStatus::InvalidConfig, e.to_string()),
        }
    })
}

/// Serializes the full effective configuration (defaults plus overrides)
/// as pretty-printed JSON. The caller frees the string with
/// `laika_spine_string_free`.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_config_to_json(
    config: *const LaikaSpineConfig,
    out: *mut *mut c_char,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(config) = (unsafe { config.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "config handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        match serde_json::to_string_pretty(&config.0.effective_json()) {
            Ok(text) => export_string(text, out),
            Err(e) => fail(LaikaSpineStatus::Internal, e.to_string()),
        }
    })
}

/// Releases a configuration handle. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_config_free(config: *mut LaikaSpineConfig) {
    if !config.is_null() {
        drop(unsafe { Box::from_raw(config) });
    }
}

/// Runs the single foot-lift test selected by the configuration's motion
/// and tension fields. On success the run handle is written to `out` and
/// owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_foot_lift(
    config: *const LaikaSpineConfig,
    out: *mut *mut LaikaSpineRun,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(config) = (unsafe { config.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "config handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let resolved = config.0.resolve();
        match run_foot_lift_test(
            &resolved.robot,
            &resolved.sim,
            &resolved.harness,
            &resolved.motion,
            resolved.tension,
        ) {
            Ok(result) => {
                unsafe { *out = Box::into_raw(Box::new(LaikaSpineRun(result))) };
                LaikaSpineStatus::Ok
            }
            Err(e) => fail(LaikaSpineStatus::RunFailed, e.to_string()),
        }
    })
}

/// Releases a run handle. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_free(run: *mut LaikaSpineRun) {
    if !run.is_null() {
        drop(unsafe { Box::from_raw(run) });
    }
}

/// Writes `true` to `out` if the run produced a sustained lift.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_lifted(
    run: *const LaikaSpineRun,
    out: *mut bool,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(run) = (unsafe { run.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "run handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        unsafe { *out = run.0.lift.is_some() };
        LaikaSpineStatus::Ok
    })
}

/// Writes the letter of the first lifted foot (`'A'` to `'D'`). Fails
/// with `NoLift` if the run never produced one.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_lifted_foot(
    run: *const LaikaSpineRun,
    out: *mut c_char,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(run) = (unsafe { run.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "run handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let Some(lift) = run.0.lift else {
            return fail(LaikaSpineStatus::NoLift, "the run produced no lift");
        };
        unsafe { *out = (b'A' + lift.foot.index() as u8) as c_char };
        LaikaSpineStatus::Ok
    })
}

/// Writes the rotation angle at first lift, in radians. Fails with
/// `NoLift` if the run never produced one.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_lift_angle_rad(
    run: *const LaikaSpineRun,
    out: *mut f64,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(run) = (unsafe { run.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "run handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let Some(lift) = run.0.lift else {
            return fail(LaikaSpineStatus::NoLift, "the run produced no lift");
        };
        unsafe { *out = lift.angle };
        LaikaSpineStatus::Ok
    })
}

/// Writes the rotation-phase time of first lift, in seconds. Fails with
/// `NoLift` if the run never produced one.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_lift_time_s(
    run: *const LaikaSpineRun,
    out: *mut f64,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(run) = (unsafe { run.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "run handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let Some(lift) = run.0.lift else {
            return fail(LaikaSpineStatus::NoLift, "the run produced no lift");
        };
        unsafe { *out = lift.time };
        LaikaSpineStatus::Ok
    })
}

/// Writes the number of samples on the run's trace grid.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_sample_count(
    run: *const LaikaSpineRun,
    out: *mut usize,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(run) = (unsafe { run.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "run handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        unsafe { *out = run.0.samples.len() };
        LaikaSpineStatus::Ok
    })
}

/// Serializes the run's trace as CSV text, identical byte for byte to the
/// trace files the command-line tool writes. The caller frees the string
/// with `laika_spine_string_free`.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_run_trace_csv(
    run: *const LaikaSpineRun,
    out: *mut *mut c_char,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(run) = (unsafe { run.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "run handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        export_string(format_trace(&run.0.samples), out)
    })
}

/// Runs the full calibration sweep (four motions at each of the five
/// tension points) and compares it against the hardware reference. The
/// configuration's motion and tension selections are ignored; its robot,
/// world, and protocol parameters apply to every run. On success the
/// sweep handle is written to `out` and owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_sweep_new(
    config: *const LaikaSpineConfig,
    out: *mut *mut LaikaSpineSweep,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(config) = (unsafe { config.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "config handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let resolved = config.0.resolve();
        let results = match calibration_sweep(
            &resolved.robot,
            &resolved.sim,
            &resolved.harness,
            &TensionPoint::CANONICAL,
        ) {
            Ok(results) => results,
            Err(e) => return fail(LaikaSpineStatus::RunFailed, e.to_string()),
        };
        let assessment = assess_tension_points(
            &results,
            &HardwareReference::standard(),
            resolved.comparison_tolerance,
        );
        let report = build_report(
            config.0.effective_json(),
            &results,
            &vec![None; results.len()],
            Some((&assessment, resolved.comparison_tolerance)),
        );
        let handle = Box::new(LaikaSpineSweep { results, report });
        unsafe { *out = Box::into_raw(handle) };
        LaikaSpineStatus::Ok
    })
}

/// Releases a sweep handle. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_sweep_free(sweep: *mut LaikaSpineSweep) {
    if !sweep.is_null() {
        drop(unsafe { Box::from_raw(sweep) });
    }
}

/// Writes the number of runs in the sweep.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_sweep_run_count(
    sweep: *const LaikaSpineSweep,
    out: *mut usize,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(sweep) = (unsafe { sweep.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "sweep handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        unsafe { *out = sweep.results.len() };
        LaikaSpineStatus::Ok
    })
}

/// Serializes the sweep's full report (runs, per-foot summaries, and the
/// tension-point ranking) as pretty-printed JSON. The caller frees the
/// string with `laika_spine_string_free`.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_sweep_report_json(
    sweep: *const LaikaSpineSweep,
    out: *mut *mut c_char,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(sweep) = (unsafe { sweep.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "sweep handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        export_string(sweep.report.to_json_string(), out)
    })
}

/// Writes the name of the best-matching tension point (for example
/// `"mean"`). The caller frees the string with `laika_spine_string_free`.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_sweep_best_tension(
    sweep: *const LaikaSpineSweep,
    out: *mut *mut c_char,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(sweep) = (unsafe { sweep.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "sweep handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let Some(comparison) = &sweep.report.comparison else {
            return fail(LaikaSpineStatus::Internal, "sweep has no comparison section");
        };
        export_string(comparison.best_tension.clone(), out)
    })
}

/// Serializes one run of the sweep as CSV trace text. Runs are ordered
/// motion-major (all five tension points for foot A, then B, C, D). Fails
/// with `OutOfRange` if `index` is not below the run count.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_sweep_trace_csv(
    sweep: *const LaikaSpineSweep,
    index: usize,
    out: *mut *mut c_char,
) -> LaikaSpineStatus {
    guarded(|| {
        let Some(sweep) = (unsafe { sweep.as_ref() }) else {
            return fail(LaikaSpineStatus::NullArgument, "sweep handle is null");
        };
        if out.is_null() {
            return fail(LaikaSpineStatus::NullArgument, "out pointer is null");
        }
        let Some(result) = sweep.results.get(index) else {
            return fail(
                LaikaSpineStatus::OutOfRange,
                format!("run index {index} out of range for {} runs", sweep.results.len()),
            );
        };
        export_string(format_trace(&result.samples), out)
    })
}

/// Releases a string returned through any `out` parameter of this
/// library. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn laika_spine_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}
