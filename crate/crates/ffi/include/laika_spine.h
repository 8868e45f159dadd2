#ifndef LAIKA_SPINE_H
#define LAIKA_SPINE_H

/* Generated by cbindgen from laika-spine-ffi; edit src/lib.rs instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of an API call. Anything other than `Ok` leaves a description
// in the thread-local buffer read by `laika_spine_last_error`.
typedef enum {
  // The call succeeded.
  LAIKA_SPINE_STATUS_OK = 0,
  // A required pointer argument was null.
  LAIKA_SPINE_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  LAIKA_SPINE_STATUS_INVALID_UTF8 = 2,
  // The configuration document was rejected (syntax, unknown key, or
  // out-of-range value).
  LAIKA_SPINE_STATUS_INVALID_CONFIG = 3,
  // The simulation could not be run to completion.
  LAIKA_SPINE_STATUS_RUN_FAILED = 4,
  // The queried run never produced a lift.
  LAIKA_SPINE_STATUS_NO_LIFT = 5,
  // An index argument was out of bounds.
  LAIKA_SPINE_STATUS_OUT_OF_RANGE = 6,
  // An internal invariant failed; the handle is still valid but the
  // call produced nothing.
  LAIKA_SPINE_STATUS_INTERNAL = 7,
} LaikaSpineStatus;

// A validated configuration document (opaque).
typedef struct LaikaSpineConfig LaikaSpineConfig;

// One completed foot-lift run (opaque).
typedef struct LaikaSpineRun LaikaSpineRun;

// A completed five-point calibration sweep with its hardware comparison
// (opaque).
typedef struct LaikaSpineSweep LaikaSpineSweep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the library version as a static NUL-terminated string.
const char *laika_spine_version(void);

// Returns the message from the most recent failing call on this thread,
// or an empty string if none has failed yet. The pointer stays valid
// until the next failing call on the same thread.
const char *laika_spine_last_error(void);

// Creates a configuration holding every default value. Never fails with
// a valid `out` pointer.
LaikaSpineStatus laika_spine_config_default(LaikaSpineConfig **out);

// Parses and validates a JSON configuration document. `json` must be a
// NUL-terminated UTF-8 string; `{}` yields the defaults. On success the
// new handle is written to `out` and owned by the caller.
LaikaSpineStatus laika_spine_config_from_json(const char *json, LaikaSpineConfig **out);

// Serializes the full effective configuration (defaults plus overrides)
// as pretty-printed JSON. The caller frees the string with
// `laika_spine_string_free`.
LaikaSpineStatus laika_spine_config_to_json(const LaikaSpineConfig *config, char **out);

// Releases a configuration handle. Passing null is a no-op.
void laika_spine_config_free(LaikaSpineConfig *config);

// Runs the single foot-lift test selected by the configuration's motion
// and tension fields. On success the run handle is written to `out` and
// owned by the caller.
LaikaSpineStatus laika_spine_run_foot_lift(const LaikaSpineConfig *config, LaikaSpineRun **out);

// Releases a run handle. Passing null is a no-op.
void laika_spine_run_free(LaikaSpineRun *run);

// Writes `true` to `out` if the run produced a sustained lift.
LaikaSpineStatus laika_spine_run_lifted(const LaikaSpineRun *run, bool *out);

// Writes the letter of the first lifted foot (`'A'` to `'D'`). Fails
// with `NoLift` if the run never produced one.
LaikaSpineStatus laika_spine_run_lifted_foot(const LaikaSpineRun *run, char *out);

// Writes the rotation angle at first lift, in radians. Fails with
// `NoLift` if the run never produced one.
LaikaSpineStatus laika_spine_run_lift_angle_rad(const LaikaSpineRun *run, double *out);

// Writes the rotation-phase time of first lift, in seconds. Fails with
// `NoLift` if the run never produced one.
LaikaSpineStatus laika_spine_run_lift_time_s(const LaikaSpineRun *run, double *out);

// Writes the number of samples on the run's trace grid.
LaikaSpineStatus laika_spine_run_sample_count(const LaikaSpineRun *run, size_t *out);

// Serializes the run's trace as CSV text, identical byte for byte to the
// trace files the command-line tool writes. The caller frees the string
// with `laika_spine_string_free`.
LaikaSpineStatus laika_spine_run_trace_csv(const LaikaSpineRun *run, char **out);

// Runs the full calibration sweep (four motions at each of the five
// tension points) and compares it against the hardware reference. The
// configuration's motion and tension selections are ignored; its robot,
// world, and protocol parameters apply to every run. On success the
// sweep handle is written to `out` and owned by the caller.
LaikaSpineStatus laika_spine_sweep_new(const LaikaSpineConfig *config, LaikaSpineSweep **out);

// Releases a sweep handle. Passing null is a no-op.
void laika_spine_sweep_free(LaikaSpineSweep *sweep);

// Writes the number of runs in the sweep.
LaikaSpineStatus laika_spine_sweep_run_count(const LaikaSpineSweep *sweep, size_t *out);

// Serializes the sweep's full report (runs, per-foot summaries, and the
// tension-point ranking) as pretty-printed JSON. The caller frees the
// string with `laika_spine_string_free`.
LaikaSpineStatus laika_spine_sweep_report_json(const LaikaSpineSweep *sweep, char **out);

// Writes the name of the best-matching tension point (for example
// `"mean"`). The caller frees the string with `laika_spine_string_free`.
LaikaSpineStatus laika_spine_sweep_best_tension(const LaikaSpineSweep *sweep, char **out);

// Serializes one run of the sweep as CSV trace text. Runs are ordered
// motion-major (all five tension points for foot A, then B, C, D). Fails
// with `OutOfRange` if `index` is not below the run count.
LaikaSpineStatus laika_spine_sweep_trace_csv(const LaikaSpineSweep *sweep,
                                             size_t index,
                                             char **out);

// Releases a string returned through any `out` parameter of this
// library. Passing null is a no-op.
void laika_spine_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAIKA_SPINE_H */
