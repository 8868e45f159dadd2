//! Foot-lift experiment runner.
//!
//! One run walks the robot through the test protocol:
//!
//! 1. settle the standing robot under gravity,
//! 2. ramp one lateral horizontal cable set down to its bend length and
//!    settle again,
//! 3. ramp the center hinge toward its maximum angle while sampling the
//!    height of every foot on a fixed grid,
//! 4. report the first foot whose ground clearance exceeds a threshold for a
//!    full hold window, together with the hinge angle at which that
//!    clearance was first crossed.
//!
//! The calibration sweep repeats the run for every motion and every spring
//! operating point, and the assessment functions score each operating point
//! against lift angles measured on the physical robot.

use std::time::Instant;

use rayon::prelude::*;

use crate::actuation::{bend_rest_lengths, horizontal_set, rotation_angle, ActuationError, MotionSpec};
use crate::dynamics::{settle, step_dynamics, SimError, SimParams, SimState};
use crate::model::{
    apply_tension_test_point, build_laika, foot_node_ids, Foot, LaikaConfig, ModelError, TensionPoint,
};
use crate::structure::{HorizontalSide, NodeId};

/// Default slack allowed between a simulated lift angle and the reference
/// interval before the comparison counts as a miss, rad.
pub const DEFAULT_COMPARISON_TOLERANCE: f64 = 0.15;

/// Experiment-protocol knobs, as opposed to the physics knobs in
/// [`SimParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessParams {
    /// Trace sampling grid during the rotation phase, s.
    pub sample_interval: f64,
    /// Ground clearance a foot must exceed to count as lifting, m.
    pub lift_threshold: f64,
    /// How long the clearance must stay above threshold before the lift is
    /// confirmed, s. Debounces contact chatter at penalty-spring scale.
    pub lift_hold_duration: f64,
    /// Time over which the bend's rest lengths ramp to their final values,
    /// s. The bend speed is not part of the protocol (only its endpoint is),
    /// so this just needs to be slow enough to stay quasi-static.
    pub bend_ramp_duration: f64,
    /// Give-up horizon for each settle phase, s.
    pub settle_limit: f64,
    /// Extra simulated time past rotation-ramp saturation, s, so a lift that
    /// begins near the end of the ramp can still complete its hold window.
    pub post_ramp_grace: f64,
    /// Keep simulating and sampling to the end of the rotation phase even
    /// after a lift is confirmed. Off by default: the run normally stops at
    /// the first confirmed lift.
    pub full_trace: bool,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams {
            sample_interval: 0.05,
            lift_threshold: 0.002,
            lift_hold_duration: 0.5,
            bend_ramp_duration: 5.0,
            settle_limit: 30.0,
            post_ramp_grace: 5.0,
            full_trace: false,
        }
    }
}

impl HarnessParams {
    fn validate(&self) -> Result<(), HarnessError> {
        let complain = |msg: String| Err(HarnessError::BadParams(msg));
        for (name, v) in [
            ("sampleInterval", self.sample_interval),
            ("liftThreshold", self.lift_threshold),
            ("bendRampDuration", self.bend_ramp_duration),
            ("settleLimit", self.settle_limit),
        ] {
            if !(v > 0.0) {
                return complain(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [
            ("liftHoldDuration", self.lift_hold_duration),
            ("postRampGrace", self.post_ramp_grace),
        ] {
            if !(v >= 0.0) {
                return complain(format!("{name} must be non-negative, got {v}"));
            }
        }
        Ok(())
    }
}

/// One point on the rotation-phase trace grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// Time since the rotation phase began, s.
    pub time: f64,
    /// Commanded hinge angle, rad (signed).
    pub theta: f64,
    /// Ground clearance of each foot in [`Foot::ALL`] order, m. Negative
    /// while a loaded foot presses into the penalty ground.
    pub foot_clearances: [f64; 4],
    /// Whether each foot bears on the ground (clearance ≤ 0).
    pub contacts: [bool; 4],
}

/// A confirmed lift: the foot, and when and at what hinge angle its
/// clearance first crossed the threshold of the hold window that confirmed
/// it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOff {
    pub foot: Foot,
    /// |θ| at the first sample of the confirmed hold window, rad.
    pub angle: f64,
    /// Rotation-phase time of that first sample, s.
    pub time: f64,
}

/// Everything one run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct FootLiftResult {
    pub motion: MotionSpec,
    pub tension: TensionPoint,
    /// First confirmed lift, if any foot lifted before the run ended.
    pub lift: Option<LiftOff>,
    /// Rotation-phase trace. Always contains the t = 0 sample.
    pub samples: Vec<TraceSample>,
    /// Simulated time the initial settle took, s.
    pub settle_duration: f64,
    /// Simulated time the post-bend settle took, s.
    pub bend_settle_duration: f64,
    /// Total simulated time of the run, s.
    pub simulated_duration: f64,
    /// Wall-clock time of the run, s. Not deterministic.
    pub wall_seconds: f64,
    /// Degenerate cable evaluations seen during the run (0 in healthy runs).
    pub degenerate_cable_events: u64,
}

impl FootLiftResult {
    /// The foot this run's motion is supposed to lift first.
    #[must_use]
    pub fn target_foot(&self) -> Foot {
        self.motion.target_foot()
    }
}

/// Harness failures. Settle timeouts and integration blow-ups arrive as
/// [`SimError`]; a run where no foot lifts is a valid result, not an error.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Actuation(#[from] ActuationError),
    #[error("invalid harness parameters: {0}")]
    BadParams(String),
    #[error("built structure has no labeled feet")]
    MissingFeet,
}

/// Slop applied when comparing a hold duration against the sample grid, so
/// a window of exactly `lift_hold_duration` confirms despite float error.
const HOLD_SLOP: f64 = 1e-9;

/// Per-foot debounce state for online lift detection. Feed samples in time
/// order; a foot is confirmed once its clearance has stayed above threshold
/// from one sample through all samples of a full hold window.
#[derive(Debug, Clone)]
struct LiftDetector {
    threshold: f64,
    hold: f64,
    above_since: [Option<(f64, f64)>; 4],
    confirmed: [Option<LiftOff>; 4],
}

impl LiftDetector {
    fn new(threshold: f64, hold: f64) -> LiftDetector {
        LiftDetector {
            threshold,
            hold,
            above_since: [None; 4],
            confirmed: [None; 4],
        }
    }

    fn feed(&mut self, sample: &TraceSample) {
        for i in 0..4 {
            if self.confirmed[i].is_some() {
                continue;
            }
            if sample.foot_clearances[i] > self.threshold {
                let (t0, theta0) = *self.above_since[i].get_or_insert((sample.time, sample.theta));
                if sample.time - t0 >= self.hold - HOLD_SLOP {
                    self.confirmed[i] = Some(LiftOff {
                        foot: Foot::ALL[i],
                        angle: theta0.abs(),
                        time: t0,
                    });
                }
            } else {
                self.above_since[i] = None;
            }
        }
    }

    /// The confirmed lift whose threshold crossing came first; ties break in
    /// [`Foot::ALL`] order.
    fn first_confirmed(&self) -> Option<LiftOff> {
        self.confirmed
            .iter()
            .flatten()
            .copied()
            .min_by(|a, b| a.time.total_cmp(&b.time))
    }

    fn confirmed_for(&self, foot: Foot) -> Option<LiftOff> {
        self.confirmed[foot.index()]
    }
}

/// Scans a recorded trace for one foot's lift, using the same debounce rule
/// as the live runner: smallest |θ| at which the foot's clearance crosses
/// the threshold and stays above it for the hold window.
#[must_use]
pub fn detect_lift_off(
    samples: &[TraceSample],
    foot: Foot,
    threshold: f64,
    hold: f64,
) -> Option<LiftOff> {
    let mut detector = LiftDetector::new(threshold, hold);
    for sample in samples {
        detector.feed(sample);
        if let Some(lift) = detector.confirmed_for(foot) {
            return Some(lift);
        }
    }
    None
}

/// Scans a recorded trace for the first lift of any foot.
#[must_use]
pub fn first_lift_off(samples: &[TraceSample], threshold: f64, hold: f64) -> Option<LiftOff> {
    let mut detector = LiftDetector::new(threshold, hold);
    for sample in samples {
        detector.feed(sample);
    }
    detector.first_confirmed()
}

fn sample_feet(
    time: f64,
    state: &SimState,
    params: &SimParams,
    feet: &[NodeId; 4],
) -> TraceSample {
    let mut foot_clearances = [0.0; 4];
    let mut contacts = [false; 4];
    for (i, id) in feet.iter().enumerate() {
        let p = state.positions[id.index()];
        let clearance = p.z - params.ground_height_at(p.x, p.y);
        foot_clearances[i] = clearance;
        contacts[i] = clearance <= 0.0;
    }
    TraceSample {
        time,
        theta: state.theta,
        foot_clearances,
        contacts,
    }
}

/// Runs the full protocol for one motion at one spring operating point.
///
/// A run that ends with no foot lifted returns `lift: None`; that is a valid
/// experimental outcome. Errors are reserved for broken inputs and for
/// simulations that fail to settle or diverge.
pub fn run_foot_lift_test(
    config: &LaikaConfig,
    params: &SimParams,
    harness: &HarnessParams,
    motion: &MotionSpec,
    tension: TensionPoint,
) -> Result<FootLiftResult, HarnessError> {
    harness.validate()?;
    if !matches!(motion.pulled_set, HorizontalSide::Left | HorizontalSide::Right) {
        return Err(ActuationError::NotALateralStrip(motion.pulled_set).into());
    }
    if !(motion.ramp_duration > 0.0) {
        return Err(HarnessError::BadParams(format!(
            "rampDuration must be positive, got {}",
            motion.ramp_duration
        )));
    }
    if !(motion.max_angle >= 0.0) {
        return Err(HarnessError::BadParams(format!(
            "maxAngle must be non-negative, got {}",
            motion.max_angle
        )));
    }

    let wall = Instant::now();
    let graph = apply_tension_test_point(&build_laika(config)?, tension)?;
    let feet = foot_node_ids(&graph).ok_or(HarnessError::MissingFeet)?;
    let mut state = SimState::initial(&graph);

    let settle_duration = settle(&graph, &mut state, params, harness.settle_limit)?;

    // Bend phase: walk the pulled set's rest lengths linearly from their
    // rigged values to the bend targets, then let the structure come to rest.
    let set = horizontal_set(&graph, motion.pulled_set);
    let originals: Vec<f64> = set
        .iter()
        .map(|&i| graph.cables[i].original_rest_length)
        .collect();
    let bent = bend_rest_lengths(&originals, motion.retraction_fraction)?;
    let bend_steps = (harness.bend_ramp_duration / params.dt).round().max(1.0) as u64;
    for step in 1..=bend_steps {
        let s = step as f64 / bend_steps as f64;
        for (j, &cable_index) in set.iter().enumerate() {
            state.rest_lengths[cable_index] = originals[j] + (bent[j] - originals[j]) * s;
        }
        step_dynamics(&graph, &mut state, params)?;
    }
    let bend_settle_duration = settle(&graph, &mut state, params, harness.settle_limit)?;

    // Rotation phase: prescribe θ(t) each step and watch the feet.
    let steps_per_sample = (harness.sample_interval / params.dt).round().max(1.0) as u64;
    let rotation_steps =
        ((motion.ramp_duration + harness.post_ramp_grace) / params.dt).round() as u64;
    let mut detector = LiftDetector::new(harness.lift_threshold, harness.lift_hold_duration);
    let mut samples = Vec::with_capacity((rotation_steps / steps_per_sample + 2) as usize);
    let first = sample_feet(0.0, &state, params, &feet);
    detector.feed(&first);
    samples.push(first);
    let mut lift = detector.first_confirmed();

    for step in 1..=rotation_steps {
        let t = step as f64 * params.dt;
        state.theta = rotation_angle(t, motion);
        step_dynamics(&graph, &mut state, params)?;
        if step % steps_per_sample == 0 {
            let sample = sample_feet(t, &state, params, &feet);
            detector.feed(&sample);
            samples.push(sample);
            if lift.is_none() {
                lift = detector.first_confirmed();
            }
            if lift.is_some() && !harness.full_trace {
                break;
            }
        }
    }

    Ok(FootLiftResult {
        motion: *motion,
        tension,
        lift,
        samples,
        settle_duration,
        bend_settle_duration,
        simulated_duration: state.time,
        wall_seconds: wall.elapsed().as_secs_f64(),
        degenerate_cable_events: state.degenerate_cable_events,
    })
}

/// Runs every motion at every given operating point: motion-major in
/// [`Foot::ALL`] target order, operating points in the order given. Runs are
/// independent and execute in parallel; results come back in job order.
pub fn calibration_sweep(
    config: &LaikaConfig,
    params: &SimParams,
    harness: &HarnessParams,
    tensions: &[TensionPoint],
) -> Result<Vec<FootLiftResult>, HarnessError> {
    let jobs: Vec<(MotionSpec, TensionPoint)> = Foot::ALL
        .iter()
        .map(|&f| MotionSpec::for_target(f))
        .flat_map(|m| tensions.iter().map(move |&t| (m, t)))
        .collect();
    jobs.into_par_iter()
        .map(|(motion, tension)| run_foot_lift_test(config, params, harness, &motion, tension))
        .collect()
}

/// Closed interval of lift angles, rad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleInterval {
    pub min: f64,
    pub max: f64,
}

impl AngleInterval {
    #[must_use]
    pub fn contains(&self, angle: f64) -> bool {
        angle >= self.min && angle <= self.max
    }

    /// Distance from an angle to the interval; 0 inside it.
    #[must_use]
    pub fn distance_to(&self, angle: f64) -> f64 {
        if angle < self.min {
            self.min - angle
        } else if angle > self.max {
            angle - self.max
        } else {
            0.0
        }
    }
}

/// Reference lift angles per foot, rad (absolute values), in [`Foot::ALL`]
/// order. `hardware` holds repeat-to-repeat ranges measured on the physical
/// robot; `prior_sim` the ranges its earlier reference simulation produced
/// across spring operating points.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareReference {
    pub hardware: [AngleInterval; 4],
    pub prior_sim: [AngleInterval; 4],
}

impl HardwareReference {
    /// The measured reference data for the standard robot.
    #[must_use]
    pub fn standard() -> HardwareReference {
        HardwareReference {
            hardware: [
                AngleInterval { min: 0.44, max: 0.50 },
                AngleInterval { min: 0.57, max: 0.60 },
                AngleInterval { min: 0.51, max: 0.54 },
                AngleInterval { min: 0.41, max: 0.43 },
            ],
            prior_sim: [
                AngleInterval { min: 0.33, max: 0.47 },
                AngleInterval { min: 0.35, max: 0.47 },
                AngleInterval { min: 0.25, max: 0.44 },
                AngleInterval { min: 0.25, max: 0.43 },
            ],
        }
    }

    #[must_use]
    pub fn hardware_for(&self, foot: Foot) -> AngleInterval {
        self.hardware[foot.index()]
    }

    #[must_use]
    pub fn prior_sim_for(&self, foot: Foot) -> AngleInterval {
        self.prior_sim[foot.index()]
    }
}

/// Score charged per foot whose run produced no valid lift of the intended
/// foot, rad. Far beyond any physical angle, so any operating point that
/// lifts all four feet outranks one that misses a foot.
pub const MISSING_LIFT_PENALTY: f64 = 10.0;

/// One foot's run at one operating point, held against the reference.
#[derive(Debug, Clone, PartialEq)]
pub struct FootComparison {
    pub foot: Foot,
    /// First lift of the run targeting this foot, whichever foot it was.
    pub lift: Option<LiftOff>,
    /// Whether the run's first lift was the intended foot.
    pub lifted_intended_foot: bool,
    pub hardware: AngleInterval,
    pub prior_sim: AngleInterval,
    /// Distance from the lift angle to the hardware interval; present only
    /// when the intended foot lifted.
    pub hardware_distance: Option<f64>,
    /// Whether the lift angle is within tolerance of the hardware interval.
    pub within_tolerance: bool,
}

/// How well one spring operating point reproduced the reference, over its
/// four runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TensionPointAssessment {
    pub tension: TensionPoint,
    /// Per-foot comparisons in [`Foot::ALL`] order.
    pub feet: Vec<FootComparison>,
    /// Runs whose first lift was the intended foot.
    pub intended_lifts: usize,
    /// Feet within tolerance of their hardware interval.
    pub within_count: usize,
    /// Sum of hardware distances, with [`MISSING_LIFT_PENALTY`] charged for
    /// each foot that did not produce a valid lift. Lower is better.
    pub total_distance: f64,
}

/// Groups sweep results by operating point and ranks the points best first
/// (smallest total distance to the hardware intervals; ties keep the order
/// the points first appear in `results`).
#[must_use]
pub fn assess_tension_points(
    results: &[FootLiftResult],
    reference: &HardwareReference,
    tolerance: f64,
) -> Vec<TensionPointAssessment> {
    let mut points: Vec<TensionPoint> = Vec::new();
    for r in results {
        if !points.contains(&r.tension) {
            points.push(r.tension);
        }
    }

    let mut assessments: Vec<TensionPointAssessment> = points
        .into_iter()
        .map(|tension| {
            let mut feet = Vec::with_capacity(4);
            let mut intended_lifts = 0;
            let mut within_count = 0;
            let mut total_distance = 0.0;
            for foot in Foot::ALL {
                let run = results
                    .iter()
                    .find(|r| r.tension == tension && r.target_foot() == foot);
                let lift = run.and_then(|r| r.lift);
                let lifted_intended_foot = lift.is_some_and(|l| l.foot == foot);
                let hardware = reference.hardware_for(foot);
                let hardware_distance = if lifted_intended_foot {
                    Some(hardware.distance_to(lift.unwrap().angle))
                } else {
                    None
                };
                let within_tolerance = hardware_distance.is_some_and(|d| d <= tolerance);
                if lifted_intended_foot {
                    intended_lifts += 1;
                }
                if within_tolerance {
                    within_count += 1;
                }
                total_distance += hardware_distance.unwrap_or(MISSING_LIFT_PENALTY);
                feet.push(FootComparison {
                    foot,
                    lift,
                    lifted_intended_foot,
                    hardware,
                    prior_sim: reference.prior_sim_for(foot),
                    hardware_distance,
                    within_tolerance,
                });
            }
            TensionPointAssessment {
                tension,
                feet,
                intended_lifts,
                within_count,
                total_distance,
            }
        })
        .collect();

    assessments.sort_by(|a, b| a.total_distance.total_cmp(&b.total_distance));
    assessments
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(time: f64, theta: f64, clearances: [f64; 4]) -> TraceSample {
        TraceSample {
            time,
            theta,
            foot_clearances: clearances,
            contacts: clearances.map(|c| c <= 0.0),
        }
    }

    /// Synthetic trace on a 0.05 s grid where one foot's clearance follows
    /// the given profile and the rest stay grounded.
    fn trace_for_foot(foot: Foot, profile: &[(f64, f64)]) -> Vec<TraceSample> {
        profile
            .iter()
            .map(|&(t, clearance)| {
                let mut clearances = [-1e-4; 4];
                clearances[foot.index()] = clearance;
                // θ ramps like the real protocol: 0.03 rad/s.
                sample(t, 0.03 * t, clearances)
            })
            .collect()
    }

    fn grid(start: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| start + 0.05 * i as f64).collect()
    }

    #[test]
    fn sustained_crossing_is_detected_at_its_first_sample() {
        // Below threshold until t = 15.0, above from then on.
        let mut profile: Vec<(f64, f64)> = grid(0.0, 300).into_iter().map(|t| (t, 0.0)).collect();
        profile.extend(grid(15.0, 20).into_iter().map(|t| (t, 0.004)));
        let trace = trace_for_foot(Foot::C, &profile);
        let lift = detect_lift_off(&trace, Foot::C, 0.002, 0.5).expect("must detect");
        assert_eq!(lift.foot, Foot::C);
        assert_relative_eq!(lift.time, 15.0, epsilon = 1e-12);
        assert_relative_eq!(lift.angle, 0.45, epsilon = 1e-12);
    }

    #[test]
    fn short_spike_is_debounced() {
        // Above threshold for only 0.2 s, shorter than the 0.5 s hold.
        let profile: Vec<(f64, f64)> = grid(0.0, 100)
            .into_iter()
            .map(|t| (t, if (2.0..2.2).contains(&t) { 0.01 } else { 0.0 }))
            .collect();
        let trace = trace_for_foot(Foot::A, &profile);
        assert_eq!(detect_lift_off(&trace, Foot::A, 0.002, 0.5), None);
    }

    #[test]
    fn dip_resets_the_hold_window() {
        // Above from 1.0, dips at 1.3, above again from 1.4 onward: the
        // confirmed window starts at 1.4, not 1.0.
        let profile: Vec<(f64, f64)> = grid(0.0, 100)
            .into_iter()
            .map(|t| {
                let above = (t >= 1.0 && t < 1.3) || t >= 1.4;
                (t, if above { 0.005 } else { 0.0 })
            })
            .collect();
        let trace = trace_for_foot(Foot::B, &profile);
        let lift = detect_lift_off(&trace, Foot::B, 0.002, 0.5).expect("must detect");
        assert_relative_eq!(lift.time, 1.4, epsilon = 1e-12);
        assert_relative_eq!(lift.angle, 0.03 * 1.4, epsilon = 1e-12);
    }

    #[test]
    fn flat_trace_detects_nothing() {
        let profile: Vec<(f64, f64)> = grid(0.0, 50).into_iter().map(|t| (t, 0.0)).collect();
        let trace = trace_for_foot(Foot::D, &profile);
        for foot in Foot::ALL {
            assert_eq!(detect_lift_off(&trace, foot, 0.002, 0.5), None);
        }
        assert_eq!(first_lift_off(&trace, 0.002, 0.5), None);
    }

    #[test]
    fn first_lift_goes_to_the_earlier_crossing() {
        // Foot D crosses at 1.0, foot A at 1.2; both hold to the end.
        let trace: Vec<TraceSample> = grid(0.0, 60)
            .into_iter()
            .map(|t| {
                let mut clearances = [-1e-4; 4];
                if t >= 1.0 {
                    clearances[Foot::D.index()] = 0.01;
                }
                if t >= 1.2 {
                    clearances[Foot::A.index()] = 0.01;
                }
                sample(t, 0.03 * t, clearances)
            })
            .collect();
        let first = first_lift_off(&trace, 0.002, 0.5).expect("must detect");
        assert_eq!(first.foot, Foot::D);
        assert_relative_eq!(first.time, 1.0, epsilon = 1e-12);
        // The per-foot query still sees the later foot.
        let a = detect_lift_off(&trace, Foot::A, 0.002, 0.5).expect("must detect");
        assert_relative_eq!(a.time, 1.2, epsilon = 1e-12);
    }

    #[test]
    fn zero_hold_confirms_at_the_crossing_sample() {
        let profile: Vec<(f64, f64)> = vec![(0.0, 0.0), (0.05, 0.004)];
        let trace = trace_for_foot(Foot::A, &profile);
        let lift = detect_lift_off(&trace, Foot::A, 0.002, 0.0).expect("must detect");
        assert_relative_eq!(lift.time, 0.05, epsilon = 1e-12);
    }

    #[test]
    fn interval_distance_is_zero_inside_and_linear_outside() {
        let interval = AngleInterval { min: 0.57, max: 0.60 };
        assert!(interval.contains(0.57));
        assert!(interval.contains(0.60));
        assert!(!interval.contains(0.50));
        assert_relative_eq!(interval.distance_to(0.58), 0.0);
        assert_relative_eq!(interval.distance_to(0.50), 0.07, epsilon = 1e-12);
        assert_relative_eq!(interval.distance_to(0.62), 0.02, epsilon = 1e-12);
    }

    #[test]
    fn reference_table_is_well_formed() {
        let reference = HardwareReference::standard();
        for foot in Foot::ALL {
            let hw = reference.hardware_for(foot);
            let sim = reference.prior_sim_for(foot);
            assert!(hw.min < hw.max, "{foot}: hardware interval degenerate");
            assert!(sim.min < sim.max, "{foot}: prior-sim interval degenerate");
            for bound in [hw.min, hw.max, sim.min, sim.max] {
                assert!(
                    bound > 0.0 && bound < std::f64::consts::FRAC_PI_3,
                    "{foot}: bound {bound} outside the hinge's range"
                );
            }
        }
        // The back feet's hardware ranges sit strictly below their
        // front-side counterparts.
        assert!(reference.hardware_for(Foot::C).max < reference.hardware_for(Foot::B).min);
        assert!(reference.hardware_for(Foot::D).max < reference.hardware_for(Foot::A).min);
    }

    fn synthetic_result(foot: Foot, tension: TensionPoint, lift: Option<LiftOff>) -> FootLiftResult {
        FootLiftResult {
            motion: MotionSpec::for_target(foot),
            tension,
            lift,
            samples: Vec::new(),
            settle_duration: 0.0,
            bend_settle_duration: 0.0,
            simulated_duration: 0.0,
            wall_seconds: 0.0,
            degenerate_cable_events: 0,
        }
    }

    #[test]
    fn assessment_ranks_the_closer_tension_point_first() {
        let reference = HardwareReference::standard();
        // High: every foot lifts inside its hardware interval.
        let inside = [0.46, 0.58, 0.52, 0.42];
        // Low: A misses by 0.24 rad, B's run lifts the wrong foot, C and D
        // land inside.
        let mut results: Vec<FootLiftResult> = Vec::new();
        for (foot, angle) in Foot::ALL.into_iter().zip(inside) {
            results.push(synthetic_result(
                foot,
                TensionPoint::High,
                Some(LiftOff { foot, angle, time: 1.0 }),
            ));
        }
        results.push(synthetic_result(
            Foot::A,
            TensionPoint::Low,
            Some(LiftOff { foot: Foot::A, angle: 0.20, time: 1.0 }),
        ));
        results.push(synthetic_result(
            Foot::B,
            TensionPoint::Low,
            Some(LiftOff { foot: Foot::A, angle: 0.30, time: 1.0 }),
        ));
        results.push(synthetic_result(
            Foot::C,
            TensionPoint::Low,
            Some(LiftOff { foot: Foot::C, angle: 0.52, time: 1.0 }),
        ));
        results.push(synthetic_result(Foot::D, TensionPoint::Low, None));

        let ranked = assess_tension_points(&results, &reference, DEFAULT_COMPARISON_TOLERANCE);
        assert_eq!(ranked.len(), 2);

        let best = &ranked[0];
        assert_eq!(best.tension, TensionPoint::High);
        assert_eq!(best.intended_lifts, 4);
        assert_eq!(best.within_count, 4);
        assert_relative_eq!(best.total_distance, 0.0);

        let low = &ranked[1];
        assert_eq!(low.tension, TensionPoint::Low);
        assert_eq!(low.intended_lifts, 2);
        // A misses by 0.24 (0.44 − 0.20); B and D are charged the penalty.
        assert_relative_eq!(
            low.total_distance,
            0.24 + 2.0 * MISSING_LIFT_PENALTY,
            epsilon = 1e-12
        );
        let a = &low.feet[Foot::A.index()];
        assert!(!a.within_tolerance, "0.24 rad is past the tolerance");
        let b = &low.feet[Foot::B.index()];
        assert!(!b.lifted_intended_foot);
        assert_eq!(b.hardware_distance, None);
        let c = &low.feet[Foot::C.index()];
        assert!(c.within_tolerance);
        assert_relative_eq!(c.hardware_distance.unwrap(), 0.0);
    }

    #[test]
    fn bad_harness_params_are_rejected() {
        let config = LaikaConfig::default();
        let params = SimParams::default();
        let motion = MotionSpec::for_target(Foot::A);
        let bad = HarnessParams {
            sample_interval: 0.0,
            ..HarnessParams::default()
        };
        assert!(matches!(
            run_foot_lift_test(&config, &params, &bad, &motion, TensionPoint::Mean),
            Err(HarnessError::BadParams(_))
        ));

        let mut top_pull = motion;
        top_pull.pulled_set = HorizontalSide::Top;
        assert!(matches!(
            run_foot_lift_test(
                &config,
                &params,
                &HarnessParams::default(),
                &top_pull,
                TensionPoint::Mean
            ),
            Err(HarnessError::Actuation(ActuationError::NotALateralStrip(_)))
        ));
    }

    /// End-to-end smoke run with a shortened protocol: settle, bend, a brief
    /// rotation. Checks plumbing, not lift physics; the short ramp does not
    /// reach lift-off angles.
    #[test]
    fn shortened_run_produces_a_clean_trace() {
        let config = LaikaConfig::default();
        let params = SimParams::default();
        let harness = HarnessParams {
            bend_ramp_duration: 1.0,
            post_ramp_grace: 0.5,
            ..HarnessParams::default()
        };
        let mut motion = MotionSpec::for_target(Foot::A);
        motion.ramp_duration = 2.0;
        motion.max_angle = 0.15;

        let result =
            run_foot_lift_test(&config, &params, &harness, &motion, TensionPoint::Mean).unwrap();

        assert!(result.settle_duration > 0.0);
        assert!(result.samples.len() >= 2, "trace must hold multiple samples");
        let first = &result.samples[0];
        assert_eq!(first.time, 0.0);
        assert_eq!(first.theta, 0.0);
        for (i, clearance) in first.foot_clearances.iter().enumerate() {
            assert!(
                *clearance < harness.lift_threshold,
                "foot {} starts lifted ({clearance} m) before any rotation",
                Foot::ALL[i]
            );
        }
        let last = result.samples.last().unwrap();
        assert_relative_eq!(
            last.theta,
            motion.rotation.sign() * motion.max_angle,
            epsilon = 1e-9
        );
        for pair in result.samples.windows(2) {
            assert!(pair[1].time > pair[0].time, "sample times must increase");
            assert_relative_eq!(
                pair[1].time - pair[0].time,
                harness.sample_interval,
                epsilon = 1e-9
            );
            assert!(
                pair[1].theta.abs() + 1e-12 >= pair[0].theta.abs(),
                "|θ| must be non-decreasing along the ramp"
            );
        }
        for s in &result.samples {
            for c in s.foot_clearances {
                assert!(c.is_finite() && c.abs() < 0.5, "clearance {c} out of range");
            }
        }
        assert_eq!(result.degenerate_cable_events, 0);
    }
}
