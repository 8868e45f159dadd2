//! Structure graph for cable-driven tensegrity robots.
//!
//! A structure is a set of point-mass nodes connected by three kinds of
//! elements:
//!
//! * cables: spring-dampers that can only pull,
//! * rods: hard two-node distance constraints,
//! * rigid groups: node sets that move as one rigid body.
//!
//! The graph holds build-time data only (masses, build pose, rest lengths,
//! roles). Time-varying quantities live in [`crate::dynamics::SimState`] so a
//! graph can be shared by many concurrent simulations.

use std::collections::BTreeMap;

use nalgebra::{Unit, Vector3};
use serde::{Deserialize, Serialize};

/// Index of a node in [`StructureGraph::nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    #[must_use]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Point mass with a build pose. Anchored nodes never move.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
    pub mass: f64,
    pub anchored: bool,
}

/// Hard distance constraint between two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Rod {
    pub a: NodeId,
    pub b: NodeId,
    pub length: f64,
}

/// Node set that moves as a single rigid body.
///
/// `reference_positions` is the group's shape in build coordinates, one entry
/// per member. The dynamics engine fits the best rigid transform of this
/// shape to the members' current positions each step.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidGroup {
    pub label: String,
    pub members: Vec<NodeId>,
    pub reference_positions: Vec<Vector3<f64>>,
}

/// One-sided compression stop between two nodes.
///
/// Models mechanical interference: the arms of neighbouring vertebrae
/// interleave, so bodies that drift together eventually press rigid parts
/// against each other. The stop pushes the nodes apart once their distance
/// falls below `engage_distance` and is inert otherwise. Without it a
/// tension-only lattice has nothing that resists two bodies folding into
/// the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bumper {
    pub a: NodeId,
    pub b: NodeId,
    /// Centre distance below which the stop starts pushing, m.
    pub engage_distance: f64,
}

/// Pair of rigid groups joined by a revolute axis.
///
/// The driven group's reference shape is rotated about the axis by the
/// commanded angle before rigid projection, so the relative angle between
/// the halves is prescribed exactly rather than servoed by forces.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingJoint {
    /// Index into [`StructureGraph::rigid_groups`] for the half that defines
    /// the body frame.
    pub driving_group: usize,
    /// Index of the half that is rotated relative to the driving half.
    pub driven_group: usize,
    /// Hinge direction in build coordinates.
    pub axis: Unit<Vector3<f64>>,
    /// Point on the hinge line in build coordinates.
    pub pivot: Vector3<f64>,
}

/// Which lattice strip a horizontal cable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum HorizontalSide {
    Top,
    Bottom,
    Left,
    Right,
}

impl HorizontalSide {
    pub const ALL: [HorizontalSide; 4] = [
        HorizontalSide::Top,
        HorizontalSide::Bottom,
        HorizontalSide::Left,
        HorizontalSide::Right,
    ];

    /// Left and right swap under a lateral mirror; top and bottom map to
    /// themselves.
    #[must_use]
    pub fn mirrored(self) -> HorizontalSide {
        match self {
            HorizontalSide::Left => HorizontalSide::Right,
            HorizontalSide::Right => HorizontalSide::Left,
            other => other,
        }
    }
}

/// Mechanical role of a cable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CableRole {
    /// Member of a spine-long actuated set. `groove` is the 1-based spool
    /// groove the cable winds on; cables sharing a motor are retracted in
    /// proportion to their groove radius.
    Horizontal { side: HorizontalSide, groove: u8 },
    /// Passive lattice cable between adjacent vertebrae. Never actuated.
    Saddle,
    /// Anything else (rigging, test fixtures).
    StructuralPassive,
}

impl CableRole {
    #[must_use]
    pub fn is_horizontal(self, side: HorizontalSide) -> bool {
        matches!(self, CableRole::Horizontal { side: s, .. } if s == side)
    }
}

/// Elastic material a cable is cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MaterialTag {
    Silicone,
    BunaN,
    MechanicalSpring,
}

/// Measured spring-constant distribution for one material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MaterialSpec {
    pub name: String,
    /// Mean spring constant, N/m.
    pub k_mean: f64,
    /// One standard deviation of the spring constant, N/m. Zero for parts
    /// with an exact rating.
    pub k_std: f64,
}

/// Spring-damper that can only pull.
#[derive(Debug, Clone, PartialEq)]
pub struct Cable {
    pub a: NodeId,
    pub b: NodeId,
    /// Spring constant k, N/m.
    pub stiffness: f64,
    /// Damping coefficient c, N·s/m. Acts only while the cable is taut.
    pub damping: f64,
    /// Current commanded rest length at build time, m.
    pub rest_length: f64,
    /// Rest length before any actuation, m. Retraction commands are
    /// expressed relative to this.
    pub original_rest_length: f64,
    pub role: CableRole,
    pub material: MaterialTag,
}

/// Complete build-time description of a structure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StructureGraph {
    pub nodes: Vec<Node>,
    pub rods: Vec<Rod>,
    pub cables: Vec<Cable>,
    pub bumpers: Vec<Bumper>,
    pub rigid_groups: Vec<RigidGroup>,
    pub rotating_joint: Option<RotatingJoint>,
    /// Human-readable node names ("footA", "T3", ...).
    pub labels: BTreeMap<String, NodeId>,
    /// Named node subsets ("spine", "feet", ...) for analysis queries.
    pub node_sets: BTreeMap<String, Vec<NodeId>>,
    pub materials: BTreeMap<MaterialTag, MaterialSpec>,
}

impl StructureGraph {
    #[must_use]
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.get(label).copied()
    }

    /// Total mass of all nodes, kg.
    #[must_use]
    pub fn total_mass(&self) -> f64 {
        self.nodes.iter().map(|n| n.mass).sum()
    }

    fn node_exists(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }
}

/// Problems found by [`validate_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    DanglingNodeId,
    NonPositiveMass,
    OverlappingRigidGroups,
    MalformedRigidGroup,
    MissingFootLabels,
    DegenerateCable,
    DegenerateBumper,
    NegativeRestLength,
    NonPositiveStiffness,
    NegativeDamping,
    NonPositiveRodLength,
    Disconnected,
    BadRotatingJoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

/// Outcome of structural validation. Empty means the graph is well-formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    #[must_use]
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: ViolationKind, message: String) {
        self.violations.push(Violation { kind, message });
    }
}

/// Errors from structure-level queries.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StructureError {
    #[error("cable {index} endpoints coincide (separation {separation:.3e} m)")]
    DegenerateCable { index: usize, separation: f64 },
    #[error("node subset is empty")]
    EmptySubset,
    #[error("node subset has zero total mass")]
    ZeroSubsetMass,
    #[error("node id {0:?} out of range")]
    UnknownNode(NodeId),
}

/// Endpoint separation below which a cable is considered degenerate and
/// produces no force.
pub const DEGENERATE_SEPARATION: f64 = 1e-9;

/// Checks the graph for structural defects.
///
/// Verifies that all element endpoints exist, free nodes have positive mass,
/// rigid groups are internally consistent and pairwise disjoint, exactly the
/// four feet `footA`..`footD` are labeled, no cable is built degenerate, all
/// scalar element parameters are in range, the rotating joint (if any)
/// references two distinct well-formed groups, and every rigid group can
/// reach every other through cables, rods, or the rotating joint.
#[must_use]
pub fn validate_structure(graph: &StructureGraph) -> ValidationReport {
    let mut report = ValidationReport::default();

    for (i, node) in graph.nodes.iter().enumerate() {
        if !node.anchored && node.mass <= 0.0 {
            report.push(
                ViolationKind::NonPositiveMass,
                format!("free node {i} has mass {} kg", node.mass),
            );
        }
    }

    for (i, rod) in graph.rods.iter().enumerate() {
        for id in [rod.a, rod.b] {
            if !graph.node_exists(id) {
                report.push(
                    ViolationKind::DanglingNodeId,
                    format!("rod {i} references missing node {}", id.index()),
                );
            }
        }
        if rod.length <= 0.0 {
            report.push(
                ViolationKind::NonPositiveRodLength,
                format!("rod {i} has length {} m", rod.length),
            );
        }
    }

    for (i, cable) in graph.cables.iter().enumerate() {
        let mut endpoints_ok = true;
        for id in [cable.a, cable.b] {
            if !graph.node_exists(id) {
                endpoints_ok = false;
                report.push(
                    ViolationKind::DanglingNodeId,
                    format!("cable {i} references missing node {}", id.index()),
                );
            }
        }
        if endpoints_ok {
            let separation =
                (graph.nodes[cable.b.index()].position - graph.nodes[cable.a.index()].position).norm();
            if separation < DEGENERATE_SEPARATION {
                report.push(
                    ViolationKind::DegenerateCable,
                    format!("cable {i} endpoints coincide at build pose"),
                );
            }
        }
        if cable.stiffness <= 0.0 {
            report.push(
                ViolationKind::NonPositiveStiffness,
                format!("cable {i} has stiffness {} N/m", cable.stiffness),
            );
        }
        if cable.damping < 0.0 {
            report.push(
                ViolationKind::NegativeDamping,
                format!("cable {i} has damping {} N·s/m", cable.damping),
            );
        }
        if cable.rest_length < 0.0 || cable.original_rest_length < 0.0 {
            report.push(
                ViolationKind::NegativeRestLength,
                format!(
                    "cable {i} has rest length {} m (original {} m)",
                    cable.rest_length, cable.original_rest_length
                ),
            );
        }
    }

    for (i, bumper) in graph.bumpers.iter().enumerate() {
        for id in [bumper.a, bumper.b] {
            if !graph.node_exists(id) {
                report.push(
                    ViolationKind::DanglingNodeId,
                    format!("bumper {i} references missing node {}", id.index()),
                );
            }
        }
        if bumper.a == bumper.b {
            report.push(
                ViolationKind::DegenerateBumper,
                format!("bumper {i} joins node {} to itself", bumper.a.index()),
            );
        }
        if bumper.engage_distance <= 0.0 {
            report.push(
                ViolationKind::DegenerateBumper,
                format!(
                    "bumper {i} has engage distance {} m",
                    bumper.engage_distance
                ),
            );
        }
    }

    let mut group_of_node: Vec<Option<usize>> = vec![None; graph.nodes.len()];
    for (gi, group) in graph.rigid_groups.iter().enumerate() {
        if group.members.len() != group.reference_positions.len() {
            report.push(
                ViolationKind::MalformedRigidGroup,
                format!(
                    "group {gi} ({}) has {} members but {} reference positions",
                    group.label,
                    group.members.len(),
                    group.reference_positions.len()
                ),
            );
        }
        for &id in &group.members {
            if !graph.node_exists(id) {
                report.push(
                    ViolationKind::DanglingNodeId,
                    format!("group {gi} ({}) references missing node {}", group.label, id.index()),
                );
                continue;
            }
            match group_of_node[id.index()] {
                Some(other) => report.push(
                    ViolationKind::OverlappingRigidGroups,
                    format!(
                        "node {} belongs to both group {other} and group {gi} ({})",
                        id.index(),
                        group.label
                    ),
                ),
                None => group_of_node[id.index()] = Some(gi),
            }
        }
    }

    for (label, &id) in &graph.labels {
        if !graph.node_exists(id) {
            report.push(
                ViolationKind::DanglingNodeId,
                format!("label {label} references missing node {}", id.index()),
            );
        }
    }
    for (name, set) in &graph.node_sets {
        for &id in set {
            if !graph.node_exists(id) {
                report.push(
                    ViolationKind::DanglingNodeId,
                    format!("node set {name} references missing node {}", id.index()),
                );
            }
        }
    }

    let feet: Vec<&str> = ["footA", "footB", "footC", "footD"]
        .into_iter()
        .filter(|f| !graph.labels.contains_key(*f))
        .collect();
    if !feet.is_empty() {
        report.push(
            ViolationKind::MissingFootLabels,
            format!("missing foot labels: {}", feet.join(", ")),
        );
    }

    if let Some(joint) = &graph.rotating_joint {
        let n = graph.rigid_groups.len();
        if joint.driving_group >= n || joint.driven_group >= n {
            report.push(
                ViolationKind::BadRotatingJoint,
                format!(
                    "rotating joint references groups {} and {} but only {n} exist",
                    joint.driving_group, joint.driven_group
                ),
            );
        } else if joint.driving_group == joint.driven_group {
            report.push(
                ViolationKind::BadRotatingJoint,
                "rotating joint driving and driven groups coincide".to_string(),
            );
        }
    }

    check_connectivity(graph, &group_of_node, &mut report);

    report
}

/// Union-find connectivity over rigid groups, with ungrouped nodes treated as
/// singleton bodies. Cables, rods, and the rotating joint are the edges.
fn check_connectivity(graph: &StructureGraph, group_of_node: &[Option<usize>], report: &mut ValidationReport) {
    if graph.nodes.is_empty() {
        return;
    }
    let n_groups = graph.rigid_groups.len();
    // Component id per body: groups first, then one per ungrouped node.
    let body_of_node = |id: NodeId| -> Option<usize> {
        if id.index() >= graph.nodes.len() {
            return None;
        }
        Some(match group_of_node[id.index()] {
            Some(g) => g,
            None => n_groups + id.index(),
        })
    };
    let n_bodies = n_groups + graph.nodes.len();
    let mut parent: Vec<usize> = (0..n_bodies).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };

    for cable in &graph.cables {
        if let (Some(a), Some(b)) = (body_of_node(cable.a), body_of_node(cable.b)) {
            union(&mut parent, a, b);
        }
    }
    for rod in &graph.rods {
        if let (Some(a), Some(b)) = (body_of_node(rod.a), body_of_node(rod.b)) {
            union(&mut parent, a, b);
        }
    }
    if let Some(joint) = &graph.rotating_joint {
        if joint.driving_group < n_groups && joint.driven_group < n_groups {
            union(&mut parent, joint.driving_group, joint.driven_group);
        }
    }

    // Only bodies that actually contain nodes count toward connectivity.
    let mut roots: Vec<usize> = Vec::new();
    for id in 0..graph.nodes.len() {
        if let Some(body) = body_of_node(NodeId(id)) {
            let root = find(&mut parent, body);
            if !roots.contains(&root) {
                roots.push(root);
            }
        }
    }
    if roots.len() > 1 {
        report.push(
            ViolationKind::Disconnected,
            format!("structure splits into {} disconnected components", roots.len()),
        );
    }
}

/// Mass-weighted center of the given nodes (all nodes when `subset` is
/// `None`), using positions from `positions`.
pub fn center_of_mass(
    graph: &StructureGraph,
    positions: &[Vector3<f64>],
    subset: Option<&[NodeId]>,
) -> Result<Vector3<f64>, StructureError> {
    let mut weighted = Vector3::zeros();
    let mut total = 0.0;
    let mut count = 0usize;
    let mut accumulate = |id: NodeId| -> Result<(), StructureError> {
        if id.index() >= graph.nodes.len() || id.index() >= positions.len() {
            return Err(StructureError::UnknownNode(id));
        }
        let m = graph.nodes[id.index()].mass;
        weighted += m * positions[id.index()];
        total += m;
        count += 1;
        Ok(())
    };
    match subset {
        Some(ids) => {
            for &id in ids {
                accumulate(id)?;
            }
        }
        None => {
            for i in 0..graph.nodes.len() {
                accumulate(NodeId(i))?;
            }
        }
    }
    if count == 0 {
        return Err(StructureError::EmptySubset);
    }
    if total <= 0.0 {
        return Err(StructureError::ZeroSubsetMass);
    }
    Ok(weighted / total)
}

/// Straight-line distance between a cable's endpoints.
#[must_use]
pub fn cable_length(cable: &Cable, positions: &[Vector3<f64>]) -> f64 {
    (positions[cable.b.index()] - positions[cable.a.index()]).norm()
}

/// Unit vector from the cable's `a` endpoint toward its `b` endpoint.
///
/// Errors when the endpoints are closer than [`DEGENERATE_SEPARATION`]; the
/// force model treats that case as zero force instead.
pub fn cable_direction(
    cable: &Cable,
    cable_index: usize,
    positions: &[Vector3<f64>],
) -> Result<Unit<Vector3<f64>>, StructureError> {
    let d = positions[cable.b.index()] - positions[cable.a.index()];
    let norm = d.norm();
    if norm < DEGENERATE_SEPARATION {
        return Err(StructureError::DegenerateCable {
            index: cable_index,
            separation: norm,
        });
    }
    Ok(Unit::new_unchecked(d / norm))
}
