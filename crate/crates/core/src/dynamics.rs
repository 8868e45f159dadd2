//! Point-mass dynamics with cable forces, penalty ground contact, and rigid
//! projection.
//!
//! Integration is semi-implicit Euler: velocities update from forces first,
//! then positions update from the new velocities. Rigidity is enforced after
//! each position update by shape matching (see [`crate::rigid`]), so the
//! elastic cables and ground springs act on point masses while vertebra and
//! frame bodies stay exactly rigid.
//!
//! Cable tension while taut:
//!
//! ```text
//! T = k (x − r) + c ẋ,   clamped to T ≥ 0
//! ```
//!
//! where `x` is the current endpoint separation, `r` the commanded rest
//! length, and `ẋ` the rate of change of `x`. Damping resists the rate of
//! length change; it never acts while the cable is slack (elastic term ≤ 0),
//! and the clamp keeps a cable from ever pushing.

use nalgebra::Vector3;

use crate::rigid;
use crate::structure::{Bumper, Cable, NodeId, StructureGraph, DEGENERATE_SEPARATION};

/// Fixed parameters of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    /// Integration step, s.
    pub dt: f64,
    /// Gravitational acceleration, m/s² (acts along −z).
    pub gravity: f64,
    /// Ground penalty spring stiffness, N/m.
    pub ground_stiffness: f64,
    /// Ground penalty damping, N·s/m.
    pub ground_damping: f64,
    /// Mass-proportional drag rate α, 1/s: every free node feels −α·m·v.
    /// Stands in for joint and cable-termination losses. Cable damping is
    /// stiffness-proportional, so low-frequency whole-body modes (frame
    /// rocking near 2 rad/s) see almost none of it and would ring for
    /// minutes; this term gives them a damping ratio of α/2ω while adding
    /// only millinewtons at quasi-static ramp speeds.
    pub ambient_damping_rate: f64,
    /// Compression-stop spring stiffness, N/m (see
    /// [`crate::structure::Bumper`]).
    pub bumper_stiffness: f64,
    /// Compression-stop damping against approach speed, N·s/m.
    pub bumper_damping: f64,
    /// Coulomb friction coefficient.
    pub friction_coefficient: f64,
    /// Tangential speed below which friction ramps linearly instead of
    /// saturating at μN, m/s. Keeps static contacts from chattering.
    pub friction_regularization_velocity: f64,
    /// Total kinetic energy below which the structure counts as at rest, J.
    pub settle_kinetic_tol: f64,
    /// How long kinetic energy must stay below tolerance before settle
    /// returns, s.
    pub settle_window: f64,
    /// Any node faster than this aborts the run as diverged, m/s.
    pub max_speed: f64,
    /// Raised rectangular ground regions (obstacles). Ground height at a
    /// point is the tallest patch containing it, else zero.
    pub ground_patches: Vec<GroundPatch>,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            dt: 1e-4,
            gravity: 9.81,
            ground_stiffness: 2e4,
            ground_damping: 50.0,
            ambient_damping_rate: 1.0,
            bumper_stiffness: 2e4,
            bumper_damping: 50.0,
            friction_coefficient: 0.6,
            friction_regularization_velocity: 1e-3,
            settle_kinetic_tol: 5e-6,
            settle_window: 0.5,
            max_speed: 100.0,
            ground_patches: Vec::new(),
        }
    }
}

/// Axis-aligned raised ground rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPatch {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
    pub height: f64,
}

impl GroundPatch {
    #[must_use]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.min_x && x <= self.max_x && y >= self.min_y && y <= self.max_y
    }
}

impl SimParams {
    /// Ground surface height under the horizontal point (x, y), m.
    #[must_use]
    pub fn ground_height_at(&self, x: f64, y: f64) -> f64 {
        let mut h = 0.0;
        for patch in &self.ground_patches {
            if patch.contains(x, y) && patch.height > h {
                h = patch.height;
            }
        }
        h
    }
}

/// Time-varying simulation state. The graph it was created from stays
/// immutable; everything that changes during a run lives here.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub positions: Vec<Vector3<f64>>,
    pub velocities: Vec<Vector3<f64>>,
    /// Commanded rest length per cable, m. Indexed like
    /// [`StructureGraph::cables`].
    pub rest_lengths: Vec<f64>,
    /// Commanded hinge angle of the rotating joint, rad.
    pub theta: f64,
    /// Simulated time, s.
    pub time: f64,
    /// Count of degenerate-cable force evaluations seen so far. The first
    /// one is logged as a warning.
    pub degenerate_cable_events: u64,
}

impl SimState {
    /// State at the graph's build pose.
    #[must_use]
    pub fn initial(graph: &StructureGraph) -> SimState {
        SimState {
            positions: graph.nodes.iter().map(|n| n.position).collect(),
            velocities: graph.nodes.iter().map(|n| n.velocity).collect(),
            rest_lengths: graph.cables.iter().map(|c| c.rest_length).collect(),
            theta: 0.0,
            time: 0.0,
            degenerate_cable_events: 0,
        }
    }
}

/// Simulation failures.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum SimError {
    #[error("non-finite state at t = {time:.6} s (node {node})")]
    NonFinite { time: f64, node: usize },
    #[error("velocity diverged at t = {time:.6} s (node {node} at {speed:.1} m/s)")]
    Diverged { time: f64, node: usize, speed: f64 },
    #[error(
        "failed to settle within {limit:.1} s (kinetic energy {kinetic:.3e} J, tolerance {tol:.3e} J)"
    )]
    SettleTimeout { limit: f64, kinetic: f64, tol: f64 },
    #[error("state arrays do not match the graph ({detail})")]
    StateMismatch { detail: String },
}

/// Tension and endpoint forces of one cable evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableForce {
    /// Scalar tension, N. Always ≥ 0.
    pub tension: f64,
    /// Force applied to endpoint `a`, N.
    pub on_a: Vector3<f64>,
    /// Force applied to endpoint `b`, N. Equal and opposite to `on_a`.
    pub on_b: Vector3<f64>,
}

impl CableForce {
    const ZERO: CableForce = CableForce {
        tension: 0.0,
        on_a: Vector3::new(0.0, 0.0, 0.0),
        on_b: Vector3::new(0.0, 0.0, 0.0),
    };
}

/// Tension of one cable given the current kinematics.
///
/// Degenerate cables (endpoints closer than [`DEGENERATE_SEPARATION`])
/// produce zero force; the first such event per state is logged.
#[must_use]
pub fn cable_force(cable: &Cable, rest_length: f64, state: &mut SimState) -> CableForce {
    let pa = state.positions[cable.a.index()];
    let pb = state.positions[cable.b.index()];
    let d = pb - pa;
    let x = d.norm();
    if x < DEGENERATE_SEPARATION {
        if state.degenerate_cable_events == 0 {
            log::warn!(
                "cable between nodes {} and {} is degenerate at t = {:.6} s; treating as zero force",
                cable.a.index(),
                cable.b.index(),
                state.time
            );
        }
        state.degenerate_cable_events += 1;
        return CableForce::ZERO;
    }
    let elastic = cable.stiffness * (x - rest_length);
    if elastic <= 0.0 {
        return CableForce::ZERO;
    }
    let dir = d / x;
    let rate = (state.velocities[cable.b.index()] - state.velocities[cable.a.index()]).dot(&dir);
    let tension = (elastic + cable.damping * rate).max(0.0);
    CableForce {
        tension,
        on_a: dir * tension,
        on_b: dir * (-tension),
    }
}

/// Penalty contact force on a point at `position` moving at `velocity`.
///
/// Normal force is `k_g·penetration − c_g·ż`, clamped ≥ 0. Tangential
/// friction opposes the tangential velocity with magnitude `μ·N`, ramped
/// linearly below the regularization speed.
#[must_use]
pub fn ground_contact_force(
    position: &Vector3<f64>,
    velocity: &Vector3<f64>,
    params: &SimParams,
) -> Vector3<f64> {
    let ground = params.ground_height_at(position.x, position.y);
    let penetration = ground - position.z;
    if penetration <= 0.0 {
        return Vector3::zeros();
    }
    let normal = (params.ground_stiffness * penetration - params.ground_damping * velocity.z).max(0.0);
    if normal == 0.0 {
        return Vector3::zeros();
    }
    let tangential = Vector3::new(velocity.x, velocity.y, 0.0);
    let speed = tangential.norm();
    let mut force = Vector3::new(0.0, 0.0, normal);
    if speed > 0.0 {
        let magnitude = params.friction_coefficient
            * normal
            * (speed / params.friction_regularization_velocity).min(1.0);
        force -= tangential * (magnitude / speed);
    }
    force
}

/// Net force on every node: gravity + cables + ground contact.
///
/// Forces on anchored nodes are reported here but ignored by the
/// integrator. Cable contributions cancel pairwise, so their sum over all
/// nodes is zero.
#[must_use]
pub fn net_forces(graph: &StructureGraph, state: &mut SimState, params: &SimParams) -> Vec<Vector3<f64>> {
    let mut forces: Vec<Vector3<f64>> = graph
        .nodes
        .iter()
        .zip(&state.velocities)
        .map(|(n, v)| {
            Vector3::new(0.0, 0.0, -params.gravity * n.mass)
                - params.ambient_damping_rate * n.mass * v
        })
        .collect();

    for (i, cable) in graph.cables.iter().enumerate() {
        let f = cable_force(cable, state.rest_lengths[i], state);
        forces[cable.a.index()] += f.on_a;
        forces[cable.b.index()] += f.on_b;
    }

    for bumper in &graph.bumpers {
        let f = bumper_force(bumper, state, params);
        forces[bumper.a.index()] -= f;
        forces[bumper.b.index()] += f;
    }

    for i in 0..graph.nodes.len() {
        forces[i] += ground_contact_force(&state.positions[i], &state.velocities[i], params);
    }

    forces
}

/// Repulsive force of a compression stop, as the vector acting on node `b`
/// (node `a` receives the negation). Zero until the nodes close within the
/// engage distance; inside it, a damped penalty spring pushes them apart.
/// The clamp keeps the stop from ever pulling.
#[must_use]
pub fn bumper_force(bumper: &Bumper, state: &SimState, params: &SimParams) -> Vector3<f64> {
    let delta = state.positions[bumper.b.index()] - state.positions[bumper.a.index()];
    let distance = delta.norm();
    if distance >= bumper.engage_distance || distance < DEGENERATE_SEPARATION {
        return Vector3::zeros();
    }
    let direction = delta / distance;
    let approach_speed =
        -(state.velocities[bumper.b.index()] - state.velocities[bumper.a.index()]).dot(&direction);
    let magnitude = params.bumper_stiffness * (bumper.engage_distance - distance)
        + params.bumper_damping * approach_speed;
    direction * magnitude.max(0.0)
}

/// Advances the state by one step of semi-implicit Euler and re-projects all
/// rigidity constraints.
pub fn step_dynamics(graph: &StructureGraph, state: &mut SimState, params: &SimParams) -> Result<(), SimError> {
    if state.positions.len() != graph.nodes.len() {
        return Err(SimError::StateMismatch {
            detail: format!(
                "{} positions for {} nodes",
                state.positions.len(),
                graph.nodes.len()
            ),
        });
    }
    if state.rest_lengths.len() != graph.cables.len() {
        return Err(SimError::StateMismatch {
            detail: format!(
                "{} rest lengths for {} cables",
                state.rest_lengths.len(),
                graph.cables.len()
            ),
        });
    }

    let forces = net_forces(graph, state, params);
    let dt = params.dt;
    for (i, node) in graph.nodes.iter().enumerate() {
        if node.anchored {
            state.velocities[i] = Vector3::zeros();
            continue;
        }
        state.velocities[i] += forces[i] * (dt / node.mass);
    }
    for (i, node) in graph.nodes.iter().enumerate() {
        if !node.anchored {
            state.positions[i] += state.velocities[i] * dt;
        }
    }

    project_rods(graph, state);
    project_rigid_groups(graph, state);

    state.time += dt;
    check_health(graph, state, params)
}

fn check_health(graph: &StructureGraph, state: &SimState, params: &SimParams) -> Result<(), SimError> {
    let max_speed_sq = params.max_speed * params.max_speed;
    for i in 0..graph.nodes.len() {
        let p = &state.positions[i];
        let v = &state.velocities[i];
        if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite() && v.x.is_finite() && v.y.is_finite() && v.z.is_finite())
        {
            return Err(SimError::NonFinite {
                time: state.time,
                node: i,
            });
        }
        let speed_sq = v.norm_squared();
        if speed_sq > max_speed_sq {
            return Err(SimError::Diverged {
                time: state.time,
                node: i,
                speed: speed_sq.sqrt(),
            });
        }
    }
    Ok(())
}

/// Restores each rod's length by moving its endpoints along the rod axis in
/// inverse proportion to their masses, and removes the relative velocity
/// component along the axis.
fn project_rods(graph: &StructureGraph, state: &mut SimState) {
    for rod in &graph.rods {
        let (ia, ib) = (rod.a.index(), rod.b.index());
        let d = state.positions[ib] - state.positions[ia];
        let len = d.norm();
        if len < DEGENERATE_SEPARATION {
            continue;
        }
        let n = d / len;
        let wa = if graph.nodes[ia].anchored { 0.0 } else { 1.0 / graph.nodes[ia].mass };
        let wb = if graph.nodes[ib].anchored { 0.0 } else { 1.0 / graph.nodes[ib].mass };
        let w = wa + wb;
        if w == 0.0 {
            continue;
        }
        let error = len - rod.length;
        state.positions[ia] += n * (error * wa / w);
        state.positions[ib] -= n * (error * wb / w);
        let rel = (state.velocities[ib] - state.velocities[ia]).dot(&n);
        state.velocities[ia] += n * (rel * wa / w);
        state.velocities[ib] -= n * (rel * wb / w);
    }
}

/// Shape-matches every rigid group. The two halves of the rotating joint are
/// projected as one combined body whose driven-half reference shape is
/// rotated by the commanded angle, so the hinge angle is prescribed exactly.
pub(crate) fn project_rigid_groups(graph: &StructureGraph, state: &mut SimState) {
    let masses: Vec<f64> = graph.nodes.iter().map(|n| n.mass).collect();
    let joint = graph.rotating_joint.as_ref();
    for (gi, group) in graph.rigid_groups.iter().enumerate() {
        if let Some(j) = joint {
            if gi == j.driving_group || gi == j.driven_group {
                continue;
            }
        }
        rigid::project_group(
            &group.members,
            &masses,
            &group.reference_positions,
            &mut state.positions,
            &mut state.velocities,
        );
    }
    if let Some(j) = joint {
        let (members, reference) = rotating_assembly_shape(graph, j, state.theta);
        rigid::project_group(
            &members,
            &masses,
            &reference,
            &mut state.positions,
            &mut state.velocities,
        );
    }
}

/// Combined member list and θ-rotated reference shape of the rotating
/// assembly.
pub(crate) fn rotating_assembly_shape(
    graph: &StructureGraph,
    joint: &crate::structure::RotatingJoint,
    theta: f64,
) -> (Vec<NodeId>, Vec<Vector3<f64>>) {
    let driving = &graph.rigid_groups[joint.driving_group];
    let driven = &graph.rigid_groups[joint.driven_group];
    let mut members = Vec::with_capacity(driving.members.len() + driven.members.len());
    members.extend_from_slice(&driving.members);
    members.extend_from_slice(&driven.members);
    let mut reference = Vec::with_capacity(members.len());
    reference.extend_from_slice(&driving.reference_positions);
    for q in &driven.reference_positions {
        reference.push(rigid::rotate_about_line(q, &joint.pivot, &joint.axis, theta));
    }
    (members, reference)
}

/// Total kinetic energy, J.
#[must_use]
pub fn kinetic_energy(graph: &StructureGraph, state: &SimState) -> f64 {
    graph
        .nodes
        .iter()
        .zip(&state.velocities)
        .map(|(n, v)| 0.5 * n.mass * v.norm_squared())
        .sum()
}

/// Steps until total kinetic energy stays below `settle_kinetic_tol` for a
/// full `settle_window`, or errs after `max_duration` of simulated time.
///
/// Returns the simulated time spent settling. An already-static structure
/// returns after exactly one window.
pub fn settle(
    graph: &StructureGraph,
    state: &mut SimState,
    params: &SimParams,
    max_duration: f64,
) -> Result<f64, SimError> {
    let start = state.time;
    let mut below_since: Option<f64> = None;
    loop {
        let ke = kinetic_energy(graph, state);
        if ke < params.settle_kinetic_tol {
            match below_since {
                Some(since) if state.time - since >= params.settle_window => {
                    return Ok(state.time - start);
                }
                Some(_) => {}
                None => below_since = Some(state.time),
            }
        } else {
            below_since = None;
        }
        if state.time - start >= max_duration {
            return Err(SimError::SettleTimeout {
                limit: max_duration,
                kinetic: ke,
                tol: params.settle_kinetic_tol,
            });
        }
        step_dynamics(graph, state, params)?;
    }
}
