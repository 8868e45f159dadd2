//! Run configuration: one flat JSON object, strict keys, SI units.
//!
//! Every knob of the robot, the integrator, and the test protocol is a
//! camelCase key in a single object. Unknown keys are rejected rather than
//! ignored, so a typo cannot silently fall back to a default. An empty
//! object is a complete configuration: every field has the default used by
//! the acceptance runs.
//!
//! Dimensional keys carry a unit suffix (`totalMassKg`, `dtS`,
//! `maxAngleRad`); composite-unit quantities (stiffnesses, damping rates)
//! are plain SI and documented on their fields.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::actuation::{MotionSpec, SpinDirection};
use crate::dynamics::SimParams;
use crate::harness::{HarnessParams, DEFAULT_COMPARISON_TOLERANCE};
use crate::model::{Foot, LaikaConfig, TensionPoint};
use crate::structure::HorizontalSide;

/// Flat configuration document. Field order is the serialization order of
/// the effective-config echo, grouped robot / world / protocol / selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct RunConfig {
    // Robot geometry and mass.
    pub total_mass_kg: f64,
    pub overall_length_m: f64,
    pub standing_height_m: f64,
    pub hip_height_m: f64,
    pub obstacle_height_m: f64,
    pub vertebra_spacing_m: f64,
    pub cap_radius_m: f64,
    pub cap_fore_aft_offset_m: f64,
    pub rotating_center_half_gap_m: f64,
    pub foot_half_wheelbase_m: f64,
    pub foot_half_track_m: f64,
    pub spine_mass_fraction: f64,
    pub shoulder_frame_mass_fraction: f64,
    pub hip_frame_mass_fraction: f64,
    pub legs_mass_fraction: f64,
    pub vertebra_center_mass_fraction: f64,
    pub leg_foot_mass_fraction: f64,
    /// Share of the spine's mass on each of the five vertebrae, hip to
    /// shoulder; must sum to 1.
    pub spine_mass_distribution: [f64; 5],
    /// Mean spring constants of the three cable materials, N/m. The lattice
    /// constants are the Mean tension point; other points swap them.
    pub silicone_k: f64,
    #[serde(rename = "bunaNK")]
    pub buna_n_k: f64,
    pub spring_k: f64,
    pub pretension_force_n: f64,
    pub bumper_engage_distance_m: f64,
    pub cable_damping_ratio: f64,
    // Integrator and world.
    pub dt_s: f64,
    /// m/s², acts along −z.
    pub gravity: f64,
    /// Ground penalty spring, N/m.
    pub ground_stiffness: f64,
    /// Ground penalty damping, N·s/m.
    pub ground_damping: f64,
    /// Mass-proportional drag rate, 1/s.
    pub ambient_damping_rate: f64,
    /// Compression-stop spring, N/m.
    pub bumper_stiffness: f64,
    /// Compression-stop damping, N·s/m.
    pub bumper_damping: f64,
    pub friction_coefficient: f64,
    /// Tangential speed below which friction ramps linearly, m/s.
    pub friction_regularization_velocity: f64,
    /// Kinetic energy below which the structure counts as at rest, J.
    pub settle_kinetic_tol: f64,
    pub settle_window_s: f64,
    /// Node speed that aborts a run as diverged, m/s.
    pub max_speed: f64,
    // Test protocol.
    /// Bend retraction fraction P: pulled rest lengths become P·r(0).
    pub retraction_fraction: f64,
    pub ramp_duration_s: f64,
    pub max_angle_rad: f64,
    pub bend_ramp_duration_s: f64,
    pub settle_limit_s: f64,
    pub post_ramp_grace_s: f64,
    pub sample_interval_s: f64,
    pub lift_threshold_m: f64,
    pub lift_hold_duration_s: f64,
    pub comparison_tolerance_rad: f64,
    // Run selection and output.
    /// Target foot (`"a"`..`"d"`) or bend/spin pair (`"left-bend+cw"`,
    /// `"pull-right+ccw"`).
    pub motion: String,
    /// `low | medLow | mean | medHigh | high`.
    pub tension: String,
    pub output_dir: String,
    /// Keep simulating to the end of the rotation ramp after a lift.
    pub full_trace: bool,
    /// Reserved. The pipeline is deterministic and uses no randomness yet.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let robot = LaikaConfig::default();
        let sim = SimParams::default();
        let harness = HarnessParams::default();
        let motion = MotionSpec::for_target(Foot::A);
        RunConfig {
            total_mass_kg: robot.total_mass,
            overall_length_m: robot.overall_length,
            standing_height_m: robot.standing_height,
            hip_height_m: robot.hip_height,
            obstacle_height_m: robot.obstacle_height,
            vertebra_spacing_m: robot.vertebra_spacing,
            cap_radius_m: robot.cap_radius,
            cap_fore_aft_offset_m: robot.cap_fore_aft_offset,
            rotating_center_half_gap_m: robot.rotating_center_half_gap,
            foot_half_wheelbase_m: robot.foot_half_wheelbase,
            foot_half_track_m: robot.foot_half_track,
            spine_mass_fraction: robot.mass_fractions.spine,
            shoulder_frame_mass_fraction: robot.mass_fractions.shoulder_frame,
            hip_frame_mass_fraction: robot.mass_fractions.hip_frame,
            legs_mass_fraction: robot.mass_fractions.legs,
            vertebra_center_mass_fraction: robot.vertebra_center_mass_fraction,
            leg_foot_mass_fraction: robot.leg_foot_mass_fraction,
            spine_mass_distribution: robot.spine_mass_distribution,
            silicone_k: robot.silicone.k_mean,
            buna_n_k: robot.buna_n.k_mean,
            spring_k: robot.spring.k_mean,
            pretension_force_n: robot.pretension_force,
            bumper_engage_distance_m: robot.bumper_engage_distance,
            cable_damping_ratio: robot.cable_damping_ratio,
            dt_s: sim.dt,
            gravity: sim.gravity,
            ground_stiffness: sim.ground_stiffness,
            ground_damping: sim.ground_damping,
            ambient_damping_rate: sim.ambient_damping_rate,
            bumper_stiffness: sim.bumper_stiffness,
            bumper_damping: sim.bumper_damping,
            friction_coefficient: sim.friction_coefficient,
            friction_regularization_velocity: sim.friction_regularization_velocity,
            settle_kinetic_tol: sim.settle_kinetic_tol,
            settle_window_s: sim.settle_window,
            max_speed: sim.max_speed,
            retraction_fraction: motion.retraction_fraction,
            ramp_duration_s: motion.ramp_duration,
            max_angle_rad: motion.max_angle,
            bend_ramp_duration_s: harness.bend_ramp_duration,
            settle_limit_s: harness.settle_limit,
            post_ramp_grace_s: harness.post_ramp_grace,
            sample_interval_s: harness.sample_interval,
            lift_threshold_m: harness.lift_threshold,
            lift_hold_duration_s: harness.lift_hold_duration,
            comparison_tolerance_rad: DEFAULT_COMPARISON_TOLERANCE,
            motion: "a".to_string(),
            tension: "high".to_string(),
            output_dir: "out".to_string(),
            full_trace: harness.full_trace,
            seed: 0,
        }
    }
}

/// Configuration failures, split so callers can distinguish bad syntax and
/// bad keys (both reported by the parser with position context) from values
/// that parse but fail their unit check.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    /// Malformed JSON or an unknown key. serde reports the offending key and
    /// line/column.
    #[error("config parse: {0}")]
    Parse(#[from] serde_json::Error),
    /// A value outside its physical range; the message names the key.
    #[error("config value: {0}")]
    Invalid(String),
}

/// The concrete objects a validated [`RunConfig`] resolves to.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub robot: LaikaConfig,
    pub sim: SimParams,
    pub harness: HarnessParams,
    pub motion: MotionSpec,
    pub tension: TensionPoint,
    pub output_dir: PathBuf,
    pub comparison_tolerance: f64,
}

/// Parses and fully validates a configuration document. An empty object
/// (`{}`) yields the defaults.
pub fn load_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

/// Parses a motion given either as a target foot letter or as a bend/spin
/// pair. Accepted forms: `a`..`d`, `left-bend+cw` (bend direction naming,
/// as in run labels), `pull-right+ccw` (pulled-strip naming).
pub fn parse_motion(s: &str) -> Option<MotionSpec> {
    if let Some(foot) = Foot::parse(s) {
        return Some(MotionSpec::for_target(foot));
    }
    let lower = s.to_ascii_lowercase();
    let (bend, spin) = lower.split_once('+')?;
    let rotation = SpinDirection::parse(spin.trim())?;
    let pulled_set = match bend.trim() {
        // Retracting a strip arcs the spine away from it, so the bend is
        // named for the opposite side.
        "left-bend" | "left" => HorizontalSide::Right,
        "right-bend" | "right" => HorizontalSide::Left,
        "pull-left" => HorizontalSide::Left,
        "pull-right" => HorizontalSide::Right,
        _ => return None,
    };
    let base = MotionSpec::for_target(Foot::A);
    Some(MotionSpec {
        pulled_set,
        rotation,
        ..base
    })
}

impl RunConfig {
    /// Unit checks for every numeric field, naming the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("totalMassKg", self.total_mass_kg),
            ("overallLengthM", self.overall_length_m),
            ("standingHeightM", self.standing_height_m),
            ("hipHeightM", self.hip_height_m),
            ("vertebraSpacingM", self.vertebra_spacing_m),
            ("capRadiusM", self.cap_radius_m),
            ("capForeAftOffsetM", self.cap_fore_aft_offset_m),
            ("rotatingCenterHalfGapM", self.rotating_center_half_gap_m),
            ("footHalfWheelbaseM", self.foot_half_wheelbase_m),
            ("footHalfTrackM", self.foot_half_track_m),
            ("spineMassFraction", self.spine_mass_fraction),
            ("shoulderFrameMassFraction", self.shoulder_frame_mass_fraction),
            ("hipFrameMassFraction", self.hip_frame_mass_fraction),
            ("legsMassFraction", self.legs_mass_fraction),
            ("vertebraCenterMassFraction", self.vertebra_center_mass_fraction),
            ("legFootMassFraction", self.leg_foot_mass_fraction),
            ("siliconeK", self.silicone_k),
            ("bunaNK", self.buna_n_k),
            ("springK", self.spring_k),
            ("pretensionForceN", self.pretension_force_n),
            ("bumperEngageDistanceM", self.bumper_engage_distance_m),
            ("dtS", self.dt_s),
            ("gravity", self.gravity),
            ("groundStiffness", self.ground_stiffness),
            ("bumperStiffness", self.bumper_stiffness),
            ("frictionRegularizationVelocity", self.friction_regularization_velocity),
            ("settleKineticTol", self.settle_kinetic_tol),
            ("maxSpeed", self.max_speed),
            ("rampDurationS", self.ramp_duration_s),
            ("bendRampDurationS", self.bend_ramp_duration_s),
            ("settleLimitS", self.settle_limit_s),
            ("sampleIntervalS", self.sample_interval_s),
            ("liftThresholdM", self.lift_threshold_m),
        ];
        for (key, value) in positive {
            if !(value > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "{key} must be positive, got {value}"
                )));
            }
        }
        let non_negative = [
            ("obstacleHeightM", self.obstacle_height_m),
            ("cableDampingRatio", self.cable_damping_ratio),
            ("groundDamping", self.ground_damping),
            ("ambientDampingRate", self.ambient_damping_rate),
            ("bumperDamping", self.bumper_damping),
            ("frictionCoefficient", self.friction_coefficient),
            ("settleWindowS", self.settle_window_s),
            ("maxAngleRad", self.max_angle_rad),
            ("postRampGraceS", self.post_ramp_grace_s),
            ("liftHoldDurationS", self.lift_hold_duration_s),
            ("comparisonToleranceRad", self.comparison_tolerance_rad),
        ];
        for (key, value) in non_negative {
            if !(value >= 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "{key} must be non-negative, got {value}"
                )));
            }
        }
        if !(self.retraction_fraction > 0.0 && self.retraction_fraction <= 1.0) {
            return Err(ConfigError::Invalid(format!(
                "retractionFraction must be in (0, 1], got {}",
                self.retraction_fraction
            )));
        }
        for (i, share) in self.spine_mass_distribution.iter().enumerate() {
            if !(*share > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "spineMassDistribution[{i}] must be positive, got {share}"
                )));
            }
        }
        if parse_motion(&self.motion).is_none() {
            return Err(ConfigError::Invalid(format!(
                "motion: expected a target foot a|b|c|d or a pair like \
                 left-bend+cw, got \"{}\"",
                self.motion
            )));
        }
        if TensionPoint::parse(&self.tension).is_none() {
            return Err(ConfigError::Invalid(format!(
                "tension: expected low|medLow|mean|medHigh|high, got \"{}\"",
                self.tension
            )));
        }
        if self.output_dir.is_empty() {
            return Err(ConfigError::Invalid(
                "outputDir must not be empty".to_string(),
            ));
        }
        Ok(())
    }

    /// Builds the concrete robot, integrator, and protocol objects.
    #[must_use = "resolving validates nothing; use the returned objects"]
    pub fn resolve(&self) -> ResolvedConfig {
        let mut robot = LaikaConfig::default();
        robot.total_mass = self.total_mass_kg;
        robot.overall_length = self.overall_length_m;
        robot.standing_height = self.standing_height_m;
        robot.hip_height = self.hip_height_m;
        robot.obstacle_height = self.obstacle_height_m;
        robot.vertebra_spacing = self.vertebra_spacing_m;
        robot.cap_radius = self.cap_radius_m;
        robot.cap_fore_aft_offset = self.cap_fore_aft_offset_m;
        robot.rotating_center_half_gap = self.rotating_center_half_gap_m;
        robot.foot_half_wheelbase = self.foot_half_wheelbase_m;
        robot.foot_half_track = self.foot_half_track_m;
        robot.mass_fractions.spine = self.spine_mass_fraction;
        robot.mass_fractions.shoulder_frame = self.shoulder_frame_mass_fraction;
        robot.mass_fractions.hip_frame = self.hip_frame_mass_fraction;
        robot.mass_fractions.legs = self.legs_mass_fraction;
        robot.vertebra_center_mass_fraction = self.vertebra_center_mass_fraction;
        robot.leg_foot_mass_fraction = self.leg_foot_mass_fraction;
        robot.spine_mass_distribution = self.spine_mass_distribution;
        robot.silicone.k_mean = self.silicone_k;
        robot.buna_n.k_mean = self.buna_n_k;
        robot.spring.k_mean = self.spring_k;
        robot.pretension_force = self.pretension_force_n;
        robot.bumper_engage_distance = self.bumper_engage_distance_m;
        robot.cable_damping_ratio = self.cable_damping_ratio;

        let sim = SimParams {
            dt: self.dt_s,
            gravity: self.gravity,
            ground_stiffness: self.ground_stiffness,
            ground_damping: self.ground_damping,
            ambient_damping_rate: self.ambient_damping_rate,
            bumper_stiffness: self.bumper_stiffness,
            bumper_damping: self.bumper_damping,
            friction_coefficient: self.friction_coefficient,
            friction_regularization_velocity: self.friction_regularization_velocity,
            settle_kinetic_tol: self.settle_kinetic_tol,
            settle_window: self.settle_window_s,
            max_speed: self.max_speed,
            ground_patches: Vec::new(),
        };

        let harness = HarnessParams {
            sample_interval: self.sample_interval_s,
            lift_threshold: self.lift_threshold_m,
            lift_hold_duration: self.lift_hold_duration_s,
            bend_ramp_duration: self.bend_ramp_duration_s,
            settle_limit: self.settle_limit_s,
            post_ramp_grace: self.post_ramp_grace_s,
            full_trace: self.full_trace,
        };

        let parsed = parse_motion(&self.motion)
            .expect("motion was checked by validate()");
        let motion = MotionSpec {
            retraction_fraction: self.retraction_fraction,
            ramp_duration: self.ramp_duration_s,
            max_angle: self.max_angle_rad,
            ..parsed
        };
        let tension = TensionPoint::parse(&self.tension)
            .expect("tension was checked by validate()");

        ResolvedConfig {
            robot,
            sim,
            harness,
            motion,
            tension,
            output_dir: PathBuf::from(&self.output_dir),
            comparison_tolerance: self.comparison_tolerance_rad,
        }
    }

    /// The effective configuration with every default filled in, as the
    /// JSON object echoed into reports.
    #[must_use]
    pub fn effective_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("RunConfig serializes infallibly")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_object_is_the_default_config() {
        let config = load_config("{}").unwrap();
        assert_eq!(config, RunConfig::default());
        let resolved = config.resolve();
        assert_relative_eq!(resolved.motion.retraction_fraction, 0.8);
        assert_relative_eq!(resolved.motion.ramp_duration, 40.0);
        assert_relative_eq!(resolved.sim.dt, 1e-4);
    }

    #[test]
    fn single_known_key_overrides_only_that_field() {
        let config = load_config("{\"totalMassKg\": 1.62}").unwrap();
        assert_eq!(config, RunConfig::default());
        let config = load_config("{\"totalMassKg\": 2.0}").unwrap();
        assert_relative_eq!(config.total_mass_kg, 2.0);
        assert_relative_eq!(config.dt_s, 1e-4);
    }

    #[test]
    fn negative_mass_is_a_unit_error_naming_the_key() {
        let err = load_config("{\"totalMassKg\": -1}").unwrap_err();
        match err {
            ConfigError::Invalid(msg) => assert!(msg.contains("totalMassKg"), "{msg}"),
            other => panic!("expected unit error, got {other}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected_and_named() {
        let err = load_config("{\"totalMasKg\": 1.62}").unwrap_err();
        match err {
            ConfigError::Parse(e) => assert!(e.to_string().contains("totalMasKg")),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn malformed_syntax_reports_position() {
        let err = load_config("{\"totalMassKg\": }").unwrap_err();
        match err {
            ConfigError::Parse(e) => {
                assert!(e.line() >= 1);
                assert!(e.column() >= 1);
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn motion_forms_parse_to_the_same_spec() {
        let by_letter = parse_motion("a").unwrap();
        let by_bend = parse_motion("left-bend+ccw").unwrap();
        let by_pull = parse_motion("pull-right+ccw").unwrap();
        assert_eq!(by_letter, by_bend);
        assert_eq!(by_letter, by_pull);
        assert_eq!(by_letter.target_foot(), Foot::A);
        assert_eq!(parse_motion("left-bend+cw").unwrap().target_foot(), Foot::C);
        assert!(parse_motion("up-bend+cw").is_none());
        assert!(parse_motion("left-bend").is_none());
    }

    #[test]
    fn motion_labels_round_trip_through_the_parser() {
        for foot in Foot::ALL {
            let motion = MotionSpec::for_target(foot);
            let reparsed = parse_motion(&motion.label()).unwrap();
            assert_eq!(reparsed, motion, "{}", motion.label());
        }
    }

    #[test]
    fn bad_selection_strings_are_named() {
        let err = load_config("{\"motion\": \"q\"}").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(ref m) if m.contains("motion")));
        let err = load_config("{\"tension\": \"max\"}").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(ref m) if m.contains("tension")));
    }

    #[test]
    fn effective_echo_contains_every_default() {
        let value = RunConfig::default().effective_json();
        let object = value.as_object().unwrap();
        assert!(object.contains_key("totalMassKg"));
        assert!(object.contains_key("dtS"));
        assert!(object.contains_key("bunaNK"));
        assert!(object.contains_key("seed"));
        assert_relative_eq!(object["retractionFraction"].as_f64().unwrap(), 0.8);
        // The echo round-trips through the strict parser.
        let text = serde_json::to_string(&value).unwrap();
        let reparsed = load_config(&text).unwrap();
        assert_eq!(reparsed, RunConfig::default());
    }

    #[test]
    fn resolved_objects_match_core_defaults() {
        let resolved = RunConfig::default().resolve();
        assert_eq!(resolved.robot, LaikaConfig::default());
        assert_eq!(resolved.sim, SimParams::default());
        assert_eq!(resolved.harness, HarnessParams::default());
        assert_eq!(resolved.tension, TensionPoint::High);
        assert_relative_eq!(resolved.comparison_tolerance, 0.15);
    }
}
