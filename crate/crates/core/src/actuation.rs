//! Cable and hinge actuation commands.
//!
//! Two inputs drive the robot. A bend command retracts one horizontal cable
//! set by scaling its rest lengths:
//!
//! ```text
//! rᵢ(final) = P · rᵢ(0),   P ∈ (0, 1]
//! ```
//!
//! A rotation command ramps the center-vertebra hinge linearly to its
//! maximum angle:
//!
//! ```text
//! θ(t) = ±(t / T) · θ_max,   saturating at t = T
//! ```
//!
//! Both are kinematic commands: they change rest lengths and the commanded
//! hinge angle, and the dynamics engine reacts through cable forces and the
//! hinge projection.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::dynamics::SimState;
use crate::model::Foot;
use crate::rigid;
use crate::structure::{CableRole, HorizontalSide, StructureGraph};

/// Spool groove radius ratios, nearest groove first. A motor retraction of δ
/// shortens the cable in groove g by δ·ratio[g−1], matching each cable's
/// distance to its target vertebra.
pub const SPOOL_RATIOS: [f64; 4] = [1.0, 1.0, 2.0, 3.0];

/// Hinge spin direction as seen from behind the robot (looking along +x,
/// hips toward shoulders). Counterclockwise from that viewpoint rolls the
/// driven half's left cap downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SpinDirection {
    Ccw,
    Cw,
}

impl SpinDirection {
    /// Sign of θ about the +x hinge axis.
    #[must_use]
    pub fn sign(self) -> f64 {
        match self {
            SpinDirection::Ccw => -1.0,
            SpinDirection::Cw => 1.0,
        }
    }

    #[must_use]
    pub fn mirrored(self) -> SpinDirection {
        match self {
            SpinDirection::Ccw => SpinDirection::Cw,
            SpinDirection::Cw => SpinDirection::Ccw,
        }
    }

    #[must_use]
    pub fn parse(s: &str) -> Option<SpinDirection> {
        match s.to_ascii_lowercase().as_str() {
            "ccw" | "+" | "positive" => Some(SpinDirection::Ccw),
            "cw" | "-" | "negative" => Some(SpinDirection::Cw),
            _ => None,
        }
    }
}

impl std::fmt::Display for SpinDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpinDirection::Ccw => "ccw",
            SpinDirection::Cw => "cw",
        })
    }
}

/// One full test motion: which lateral strip to retract, how far, and which
/// way to spin the center vertebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MotionSpec {
    /// Horizontal set the bend motor retracts. Left or Right only; the top
    /// and bottom strips are never bent in this protocol.
    pub pulled_set: HorizontalSide,
    pub rotation: SpinDirection,
    /// Final rest length as a fraction of original (P).
    pub retraction_fraction: f64,
    /// Rotation ramp duration T, s.
    pub ramp_duration: f64,
    /// Hinge angle at the end of the ramp, rad.
    pub max_angle: f64,
}

impl MotionSpec {
    /// The motion whose first lifting foot should be `foot`: spin picks the
    /// unloaded diagonal, the bend picks which end of it comes up.
    #[must_use]
    pub fn for_target(foot: Foot) -> MotionSpec {
        // One spin direction unloads the {A, D} diagonal, the other {B, C};
        // the bend shifts the body away from the pulled strip's side, so the
        // unloaded foot on the pulled side is the one that comes up.
        let (pulled_set, rotation) = match foot {
            Foot::A => (HorizontalSide::Right, SpinDirection::Ccw),
            Foot::B => (HorizontalSide::Left, SpinDirection::Cw),
            Foot::C => (HorizontalSide::Right, SpinDirection::Cw),
            Foot::D => (HorizontalSide::Left, SpinDirection::Ccw),
        };
        MotionSpec {
            pulled_set,
            rotation,
            retraction_fraction: 0.8,
            ramp_duration: 40.0,
            max_angle: std::f64::consts::FRAC_PI_3,
        }
    }

    /// Which foot this motion lifts first on the symmetric robot.
    #[must_use]
    pub fn target_foot(&self) -> Foot {
        match (self.pulled_set, self.rotation) {
            (HorizontalSide::Right, SpinDirection::Ccw) => Foot::A,
            (HorizontalSide::Left, SpinDirection::Cw) => Foot::B,
            (HorizontalSide::Right, SpinDirection::Cw) => Foot::C,
            (HorizontalSide::Left, SpinDirection::Ccw) => Foot::D,
            (other, _) => unreachable!("bend must pull a lateral strip, got {other:?}"),
        }
    }

    /// The same motion reflected across the robot's midline.
    #[must_use]
    pub fn mirrored(&self) -> MotionSpec {
        MotionSpec {
            pulled_set: self.pulled_set.mirrored(),
            rotation: self.rotation.mirrored(),
            ..*self
        }
    }

    /// Bend name in the usual convention: retracting a strip arcs the spine
    /// so the body shifts toward the opposite side.
    #[must_use]
    pub fn bend_name(&self) -> &'static str {
        match self.pulled_set {
            HorizontalSide::Right => "left-bend",
            HorizontalSide::Left => "right-bend",
            _ => "bend",
        }
    }

    /// Short machine-friendly name, e.g. `left-bend+ccw`.
    #[must_use]
    pub fn label(&self) -> String {
        format!("{}+{}", self.bend_name(), self.rotation)
    }
}

/// Actuation failures.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ActuationError {
    #[error("retraction fraction must be in (0, 1], got {0}")]
    BadRetraction(f64),
    #[error("structure has no rotating joint")]
    NoRotatingJoint,
    #[error("cable {0} is a saddle cable and cannot be actuated")]
    SaddleNotActuatable(usize),
    #[error("cable {index} groove {groove} exceeds the spool's {grooves} grooves")]
    GrooveOutOfRange { index: usize, groove: u8, grooves: usize },
    #[error("motion pulls {0:?}, which is not a lateral strip")]
    NotALateralStrip(HorizontalSide),
}

/// Indices of the cables in one horizontal set, ordered by groove.
#[must_use]
pub fn horizontal_set(graph: &StructureGraph, side: HorizontalSide) -> Vec<usize> {
    let mut set: Vec<(u8, usize)> = graph
        .cables
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c.role {
            CableRole::Horizontal { side: s, groove } if s == side => Some((groove, i)),
            _ => None,
        })
        .collect();
    set.sort();
    set.into_iter().map(|(_, i)| i).collect()
}

/// Fully-retracted rest lengths for a bend: each original rest length scaled
/// by `p`.
pub fn bend_rest_lengths(original: &[f64], p: f64) -> Result<Vec<f64>, ActuationError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(ActuationError::BadRetraction(p));
    }
    Ok(original.iter().map(|r| r * p).collect())
}

/// One motor retraction distributed over a spool's grooves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpoolCommand {
    pub side: HorizontalSide,
    /// Motor cable take-up at the unit groove, m.
    pub delta: f64,
    pub ratios: [f64; 4],
}

impl SpoolCommand {
    #[must_use]
    pub fn new(side: HorizontalSide, delta: f64) -> SpoolCommand {
        SpoolCommand {
            side,
            delta,
            ratios: SPOOL_RATIOS,
        }
    }
}

/// Per-groove rest-length reductions for a motor retraction δ.
#[must_use]
pub fn spool_deltas(command: &SpoolCommand) -> [f64; 4] {
    command.ratios.map(|r| r * command.delta)
}

/// Applies a spool retraction to the commanded rest lengths of its set,
/// measuring from each cable's original rest length. Rest lengths clamp at
/// zero; returns whether any cable saturated.
pub fn apply_spool_command(
    graph: &StructureGraph,
    state: &mut SimState,
    command: &SpoolCommand,
) -> Result<bool, ActuationError> {
    let deltas = spool_deltas(command);
    let mut saturated = false;
    for index in horizontal_set(graph, command.side) {
        let groove = match graph.cables[index].role {
            CableRole::Horizontal { groove, .. } => groove,
            CableRole::Saddle => return Err(ActuationError::SaddleNotActuatable(index)),
            CableRole::StructuralPassive => continue,
        };
        let slot = usize::from(groove)
            .checked_sub(1)
            .filter(|&s| s < deltas.len())
            .ok_or(ActuationError::GrooveOutOfRange {
                index,
                groove,
                grooves: deltas.len(),
            })?;
        let target = graph.cables[index].original_rest_length - deltas[slot];
        if target < 0.0 {
            saturated = true;
        }
        state.rest_lengths[index] = target.max(0.0);
    }
    Ok(saturated)
}

/// Commanded hinge angle at time `t` into the rotation ramp, rad.
///
/// Ramps linearly from 0 to ±max_angle over `ramp_duration`, then holds.
#[must_use]
pub fn rotation_angle(t: f64, motion: &MotionSpec) -> f64 {
    let phase = (t / motion.ramp_duration).clamp(0.0, 1.0);
    motion.rotation.sign() * phase * motion.max_angle
}

/// Sets the commanded hinge angle and kinematically places the driven half:
/// its nodes go to the rigid rotation of their reference pose by `theta`
/// about the hinge, expressed in the driving half's current frame. Driven
/// node velocities are set to the driving half's rigid velocity field.
pub fn apply_rotation(
    graph: &StructureGraph,
    state: &mut SimState,
    theta: f64,
) -> Result<(), ActuationError> {
    let joint = graph
        .rotating_joint
        .as_ref()
        .ok_or(ActuationError::NoRotatingJoint)?;
    state.theta = theta;

    let driving = &graph.rigid_groups[joint.driving_group];
    let driven = &graph.rigid_groups[joint.driven_group];
    let masses: Vec<f64> = graph.nodes.iter().map(|n| n.mass).collect();
    let fit = rigid::fit_rigid_transform(
        &driving.members,
        &masses,
        &driving.reference_positions,
        &state.positions,
    );
    let (v_cm, omega) = rigid::fit_velocity_field(
        &driving.members,
        &masses,
        &state.positions,
        &state.velocities,
        &fit.current_centroid,
    );
    for (k, &id) in driven.members.iter().enumerate() {
        let rotated =
            rigid::rotate_about_line(&driven.reference_positions[k], &joint.pivot, &joint.axis, theta);
        let placed = fit.current_centroid + fit.rotation * (rotated - fit.reference_centroid);
        state.positions[id.index()] = placed;
        state.velocities[id.index()] = v_cm + omega.cross(&(placed - fit.current_centroid));
    }
    Ok(())
}

/// Hinge angle read back from node positions: the rotation of the driven
/// half relative to the driving half about the hinge axis, rad.
pub fn relative_rotation_angle(graph: &StructureGraph, state: &SimState) -> Result<f64, ActuationError> {
    let joint = graph
        .rotating_joint
        .as_ref()
        .ok_or(ActuationError::NoRotatingJoint)?;
    let masses: Vec<f64> = graph.nodes.iter().map(|n| n.mass).collect();
    let fit_of = |group: &crate::structure::RigidGroup| {
        rigid::fit_rigid_transform(&group.members, &masses, &group.reference_positions, &state.positions)
            .rotation
    };
    let r_driving = fit_of(&graph.rigid_groups[joint.driving_group]);
    let r_driven = fit_of(&graph.rigid_groups[joint.driven_group]);
    let relative = r_driving.transpose() * r_driven;

    // Angle of `relative` about the hinge axis: project a perpendicular
    // vector through the rotation and measure its turn.
    let axis = joint.axis.into_inner();
    let seed = if axis.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u = (seed - axis * seed.dot(&axis)).normalize();
    let w = relative * u;
    Ok(f64::atan2(axis.cross(&u).dot(&w), u.dot(&w)))
}
