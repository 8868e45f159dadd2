//! Builder for the quadruped with a five-vertebra tensegrity spine.
//!
//! Coordinate frame: +x points from hips toward shoulders (forward), +y is
//! the robot's left, +z is up, ground at z = 0. Vertebra 1 is rigidly joined
//! to the hip frame, vertebra 5 to the shoulder frame; vertebra 3 is split
//! into two halves joined by a revolute hinge along the spine axis.
//!
//! Each vertebra is a point-mass tetrahedron: a center node, top/bottom cap
//! nodes offset rearward, and left/right cap nodes offset forward. Adjacent
//! vertebrae interleave, so the saddle cables that join a vertebra's forward
//! caps to its neighbor's rearward caps hold the chain apart while the four
//! horizontal cable sets (top, bottom, left, right strips) pull it together.
//! The bottom strip carries the robot's weight and is cut from the stiffer
//! elastomer.
//!
//! Horizontal sets fan out from a single motor vertebra (top/bottom from
//! vertebra 2, left/right from vertebra 4) to the other four vertebrae, so
//! one motor retracting its spool shortens all four cables of a set at once.
//! Spool grooves are ordered nearest-target first; the groove radius ratios
//! (1, 1, 2, 3) match the target distances (1, 1, 2, 3 vertebrae away), which
//! retracts farther cables proportionally more and bends the spine into a
//! roughly constant-curvature arc.

use nalgebra::{Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::structure::{
    Bumper, Cable, CableRole, HorizontalSide, MaterialSpec, MaterialTag, Node, NodeId, RigidGroup,
    RotatingJoint, StructureGraph, Violation,
};

/// The four feet: A front right, B front left, C back right, D back left.
/// Letters pair across the midline as (A, B) in front and (C, D) in back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Foot {
    A,
    B,
    C,
    D,
}

impl Foot {
    pub const ALL: [Foot; 4] = [Foot::A, Foot::B, Foot::C, Foot::D];

    /// Position of this foot in [`Foot::ALL`], used to index per-foot arrays.
    #[must_use]
    pub fn index(self) -> usize {
        match self {
            Foot::A => 0,
            Foot::B => 1,
            Foot::C => 2,
            Foot::D => 3,
        }
    }

    /// Node label of this foot in the built graph.
    #[must_use]
    pub fn label(self) -> &'static str {
        match self {
            Foot::A => "footA",
            Foot::B => "footB",
            Foot::C => "footC",
            Foot::D => "footD",
        }
    }

    /// True for the feet on the shoulder (front) frame.
    #[must_use]
    pub fn is_front(self) -> bool {
        matches!(self, Foot::A | Foot::B)
    }

    /// True for the feet on the robot's left (+y) side.
    #[must_use]
    pub fn is_left(self) -> bool {
        matches!(self, Foot::B | Foot::D)
    }

    /// The foot mirrored across the robot's midline.
    #[must_use]
    pub fn mirrored(self) -> Foot {
        match self {
            Foot::A => Foot::B,
            Foot::B => Foot::A,
            Foot::C => Foot::D,
            Foot::D => Foot::C,
        }
    }

    #[must_use]
    pub fn parse(s: &str) -> Option<Foot> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "foota" => Some(Foot::A),
            "b" | "footb" => Some(Foot::B),
            "c" | "footc" => Some(Foot::C),
            "d" | "footd" => Some(Foot::D),
            _ => None,
        }
    }
}

impl std::fmt::Display for Foot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Foot::A => "A",
            Foot::B => "B",
            Foot::C => "C",
            Foot::D => "D",
        };
        f.write_str(name)
    }
}

/// Role of a vertebra along the spine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertebraKind {
    /// End vertebra, rigidly mounted to a leg frame.
    Passive,
    /// Carries horizontal-set spool motors.
    Active,
    /// Split into driving and driven halves joined by the spine-axis hinge.
    Rotating,
}

/// The fixed vertebra layout: frames mount the ends, motors sit at 2 and 4,
/// the hinge splits the center.
#[must_use]
pub fn expected_vertebra_kind(index: u8) -> Option<VertebraKind> {
    match index {
        1 | 5 => Some(VertebraKind::Passive),
        2 | 4 => Some(VertebraKind::Active),
        3 => Some(VertebraKind::Rotating),
        _ => None,
    }
}

/// Spring-constant operating point for the two elastomer lattice materials.
///
/// The five canonical points span mean ± 2 standard deviations of the
/// measured spring constants (N/m), pairing the two materials rank by rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TensionPoint {
    Low,
    MedLow,
    Mean,
    MedHigh,
    High,
    Custom { silicone_k: f64, buna_n_k: f64 },
}

impl TensionPoint {
    pub const CANONICAL: [TensionPoint; 5] = [
        TensionPoint::Low,
        TensionPoint::MedLow,
        TensionPoint::Mean,
        TensionPoint::MedHigh,
        TensionPoint::High,
    ];

    /// Silicone spring constant at this point, N/m.
    #[must_use]
    pub fn silicone_k(self) -> f64 {
        match self {
            TensionPoint::Low => 216.0,
            TensionPoint::MedLow => 227.0,
            TensionPoint::Mean => 237.0,
            TensionPoint::MedHigh => 248.0,
            TensionPoint::High => 258.0,
            TensionPoint::Custom { silicone_k, .. } => silicone_k,
        }
    }

    /// Buna-N spring constant at this point, N/m.
    #[must_use]
    pub fn buna_n_k(self) -> f64 {
        match self {
            TensionPoint::Low => 547.0,
            TensionPoint::MedLow => 678.0,
            TensionPoint::Mean => 810.0,
            TensionPoint::MedHigh => 941.0,
            TensionPoint::High => 1073.0,
            TensionPoint::Custom { buna_n_k, .. } => buna_n_k,
        }
    }

    #[must_use]
    pub fn name(self) -> String {
        match self {
            TensionPoint::Low => "low".to_string(),
            TensionPoint::MedLow => "medLow".to_string(),
            TensionPoint::Mean => "mean".to_string(),
            TensionPoint::MedHigh => "medHigh".to_string(),
            TensionPoint::High => "high".to_string(),
            TensionPoint::Custom { silicone_k, buna_n_k } => {
                format!("custom({silicone_k},{buna_n_k})")
            }
        }
    }

    #[must_use]
    pub fn parse(s: &str) -> Option<TensionPoint> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Some(TensionPoint::Low),
            "medlow" | "med-low" => Some(TensionPoint::MedLow),
            "mean" => Some(TensionPoint::Mean),
            "medhigh" | "med-high" => Some(TensionPoint::MedHigh),
            "high" => Some(TensionPoint::High),
            _ => None,
        }
    }
}

/// How the robot's mass is split between its major components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MassFractions {
    pub spine: f64,
    pub shoulder_frame: f64,
    pub hip_frame: f64,
    pub legs: f64,
}

impl MassFractions {
    #[must_use]
    pub fn sum(&self) -> f64 {
        self.spine + self.shoulder_frame + self.hip_frame + self.legs
    }
}

impl Default for MassFractions {
    /// Spine-heavy with a heavier shoulder frame than hip frame, so the
    /// center of mass sits slightly forward of the geometric midpoint.
    fn default() -> Self {
        MassFractions {
            spine: 0.45,
            shoulder_frame: 0.20,
            hip_frame: 0.15,
            legs: 0.20,
        }
    }
}

/// All geometric and material knobs of the robot.
#[derive(Debug, Clone, PartialEq)]
pub struct LaikaConfig {
    /// Total robot mass, kg.
    pub total_mass: f64,
    /// Nose-to-tail body extent, m. Informational; the frames sit inside it.
    pub overall_length: f64,
    /// Ground to top of the spine's top caps, m.
    pub standing_height: f64,
    /// Ground to the leg-frame crossbar, m.
    pub hip_height: f64,
    /// Default obstacle height for the obstacle scenario, m.
    pub obstacle_height: f64,
    /// Distance between adjacent vertebra centers, m.
    pub vertebra_spacing: f64,
    /// Cap offset from the vertebra center, m (top/bottom vertical,
    /// left/right lateral).
    pub cap_radius: f64,
    /// Fore/aft cap offset, m. Top and bottom caps sit this far rearward of
    /// their center, left and right caps this far forward, which interleaves
    /// neighboring vertebrae.
    pub cap_fore_aft_offset: f64,
    /// Half-separation of the rotating vertebra's two center nodes along the
    /// spine axis, m.
    pub rotating_center_half_gap: f64,
    /// Foot x offset from the spine midpoint, m.
    pub foot_half_wheelbase: f64,
    /// Foot y offset from the midline, m.
    pub foot_half_track: f64,
    pub mass_fractions: MassFractions,
    /// Fraction of spine mass on each vertebra, hips to shoulders. Must sum
    /// to 1.
    pub spine_mass_distribution: [f64; 5],
    /// Fraction of a vertebra's mass at its center node; the rest is split
    /// equally over the four caps.
    pub vertebra_center_mass_fraction: f64,
    /// Fraction of a leg's mass at the foot node; the rest joins the
    /// crossbar node above it.
    pub leg_foot_mass_fraction: f64,
    pub silicone: MaterialSpec,
    pub buna_n: MaterialSpec,
    pub spring: MaterialSpec,
    /// Passive tension every lattice cable is rigged to at the build pose,
    /// N. Each cable's rest length is set to span − force/k, the way a
    /// builder tensions cables one by one against a force gauge. A uniform
    /// force reserve keeps the sagittal plane unbiased (the stiff bottom
    /// cables are not pulled harder than the top ones) and gives the saddle
    /// runs the tension they need to carry the spine's self weight.
    pub pretension_force: f64,
    /// Centre distance at which adjacent vertebrae make rigid contact, m.
    /// Must be below `vertebra_spacing` so the stops are inert at the build
    /// pose. The arms of neighbouring vertebrae interleave, so the hard
    /// limit is the forward cap tips of one vertebra reaching the next
    /// vertebra's hub: the fore-aft cap offset plus a hub radius. Contact
    /// acts on centre distance only, which blocks lengthwise packing while
    /// leaving relative rotation at preserved chord length (an arc) free.
    pub bumper_engage_distance: f64,
    /// Dimensionless damping ratio used to derive each cable's damping from
    /// its stiffness and local mass.
    pub cable_damping_ratio: f64,
}

impl Default for LaikaConfig {
    fn default() -> Self {
        LaikaConfig {
            total_mass: 1.62,
            overall_length: 0.528,
            standing_height: 0.414,
            hip_height: 0.185,
            obstacle_height: 0.075,
            vertebra_spacing: 0.088,
            cap_radius: 0.114,
            cap_fore_aft_offset: 0.055,
            rotating_center_half_gap: 0.01,
            foot_half_wheelbase: 0.19,
            foot_half_track: 0.10,
            mass_fractions: MassFractions::default(),
            spine_mass_distribution: [0.15, 0.24, 0.22, 0.24, 0.15],
            vertebra_center_mass_fraction: 0.6,
            leg_foot_mass_fraction: 0.5,
            silicone: MaterialSpec {
                name: "silicone".to_string(),
                k_mean: 237.0,
                k_std: 11.0,
            },
            buna_n: MaterialSpec {
                name: "buna-n".to_string(),
                k_mean: 810.0,
                k_std: 132.0,
            },
            spring: MaterialSpec {
                name: "mechanical-spring".to_string(),
                k_mean: 187.0,
                k_std: 0.0,
            },
            pretension_force: 2.37,
            bumper_engage_distance: 0.07,
            // Stiffness-proportional damping leaves low-frequency body modes
            // (frame rocking near 2 rad/s) with a tiny modal ratio, so the
            // per-cable ratio is set high enough that those modes still decay
            // within a few seconds. Lift-off angles come from quasi-static
            // balance and are insensitive to this value.
            cable_damping_ratio: 0.3,
        }
    }
}

impl LaikaConfig {
    /// Height of the vertebra centers, m.
    #[must_use]
    pub fn spine_height(&self) -> f64 {
        self.standing_height - self.cap_radius
    }

    fn validate(&self) -> Result<(), ModelError> {
        let complain = |msg: String| Err(ModelError::BadConfig(msg));
        if self.total_mass <= 0.0 {
            return complain(format!("totalMass must be positive, got {}", self.total_mass));
        }
        let frac_sum = self.mass_fractions.sum();
        if (frac_sum - 1.0).abs() > 1e-9 {
            return complain(format!("mass fractions must sum to 1, got {frac_sum}"));
        }
        for f in [
            self.mass_fractions.spine,
            self.mass_fractions.shoulder_frame,
            self.mass_fractions.hip_frame,
            self.mass_fractions.legs,
        ] {
            if f <= 0.0 {
                return complain(format!("mass fractions must be positive, got {f}"));
            }
        }
        let spine_sum: f64 = self.spine_mass_distribution.iter().sum();
        if (spine_sum - 1.0).abs() > 1e-9 {
            return complain(format!("spine mass distribution must sum to 1, got {spine_sum}"));
        }
        if self.spine_mass_distribution.iter().any(|&f| f <= 0.0) {
            return complain("spine mass distribution entries must be positive".to_string());
        }
        for (name, v) in [
            ("standingHeight", self.standing_height),
            ("hipHeight", self.hip_height),
            ("vertebraSpacing", self.vertebra_spacing),
            ("capRadius", self.cap_radius),
            ("capForeAftOffset", self.cap_fore_aft_offset),
            ("rotatingCenterHalfGap", self.rotating_center_half_gap),
            ("footHalfWheelbase", self.foot_half_wheelbase),
            ("footHalfTrack", self.foot_half_track),
        ] {
            if v <= 0.0 {
                return complain(format!("{name} must be positive, got {v}"));
            }
        }
        if self.spine_height() <= self.cap_radius {
            return complain(format!(
                "standingHeight {} leaves no room for the spine above cap radius {}",
                self.standing_height, self.cap_radius
            ));
        }
        // The softest cable is silicone and the shortest lattice span is the
        // vertebra spacing; the implied stretch must leave a clearly
        // positive rest length behind.
        let max_force = 0.5 * self.vertebra_spacing * self.silicone.k_mean;
        if !(0.0..=max_force).contains(&self.pretension_force) {
            return complain(format!(
                "pretensionForce must be in [0, {max_force}] N for this geometry, got {}",
                self.pretension_force
            ));
        }
        if !(0.0..self.vertebra_spacing).contains(&self.bumper_engage_distance)
            || self.bumper_engage_distance == 0.0
        {
            return complain(format!(
                "bumperEngageDistance must be in (0, vertebraSpacing), got {}",
                self.bumper_engage_distance
            ));
        }
        if self.cable_damping_ratio < 0.0 {
            return complain(format!(
                "cableDampingRatio must be non-negative, got {}",
                self.cable_damping_ratio
            ));
        }
        if !(0.0..1.0).contains(&(1.0 - self.vertebra_center_mass_fraction))
            || self.vertebra_center_mass_fraction <= 0.0
        {
            return complain(format!(
                "vertebraCenterMassFraction must be in (0, 1), got {}",
                self.vertebra_center_mass_fraction
            ));
        }
        if !(0.0..=1.0).contains(&self.leg_foot_mass_fraction) {
            return complain(format!(
                "legFootMassFraction must be in [0, 1], got {}",
                self.leg_foot_mass_fraction
            ));
        }
        for (spec, tag) in [
            (&self.silicone, "silicone"),
            (&self.buna_n, "bunaN"),
            (&self.spring, "spring"),
        ] {
            if spec.k_mean <= 0.0 {
                return complain(format!("{tag} kMean must be positive, got {}", spec.k_mean));
            }
            if spec.k_std < 0.0 {
                return complain(format!("{tag} kStd must be non-negative, got {}", spec.k_std));
            }
        }
        Ok(())
    }
}

/// Model construction failures.
#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("vertebra index {0} out of range 1..=5")]
    BadVertebraIndex(u8),
    #[error("vertebra {index} is {expected:?} in this layout, not {requested:?}")]
    VertebraKindMismatch {
        index: u8,
        expected: VertebraKind,
        requested: VertebraKind,
    },
    #[error("invalid config: {0}")]
    BadConfig(String),
    #[error("tension point sets non-positive stiffness ({material} = {value} N/m)")]
    BadTensionPoint { material: &'static str, value: f64 },
    #[error("built graph failed validation: {0:?}")]
    InvalidGraph(Vec<Violation>),
}

/// One vertebra's nodes and rigid grouping, described by label so callers
/// can merge them into a larger graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertebraParts {
    pub index: u8,
    pub kind: VertebraKind,
    /// (label, build position, mass).
    pub nodes: Vec<(String, Vector3<f64>, f64)>,
    /// (group label, member node labels).
    pub groups: Vec<(String, Vec<String>)>,
    pub hinge: Option<VertebraHinge>,
}

/// Hinge of a rotating vertebra, in build coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct VertebraHinge {
    pub axis: Unit<Vector3<f64>>,
    pub pivot: Vector3<f64>,
    pub driving_group: String,
    pub driven_group: String,
}

/// Builds one vertebra's nodes and groups at its spine station.
///
/// `kind` must match the fixed layout (ends passive, 2 and 4 active, 3
/// rotating). A rotating vertebra produces two groups: the driving half
/// carries the center and the rearward top/bottom caps, the driven half a
/// second center and the forward left/right caps, hinged about the spine
/// axis.
pub fn build_vertebra(index: u8, kind: VertebraKind, config: &LaikaConfig) -> Result<VertebraParts, ModelError> {
    let expected = expected_vertebra_kind(index).ok_or(ModelError::BadVertebraIndex(index))?;
    if kind != expected {
        return Err(ModelError::VertebraKindMismatch {
            index,
            expected,
            requested: kind,
        });
    }
    config.validate()?;

    let cx = (f64::from(index) - 3.0) * config.vertebra_spacing;
    let cz = config.spine_height();
    let center = Vector3::new(cx, 0.0, cz);
    let mass = config.total_mass
        * config.mass_fractions.spine
        * config.spine_mass_distribution[usize::from(index) - 1];
    let center_mass = mass * config.vertebra_center_mass_fraction;
    let cap_mass = mass * (1.0 - config.vertebra_center_mass_fraction) / 4.0;

    let t = center + Vector3::new(-config.cap_fore_aft_offset, 0.0, config.cap_radius);
    let b = center + Vector3::new(-config.cap_fore_aft_offset, 0.0, -config.cap_radius);
    let l = center + Vector3::new(config.cap_fore_aft_offset, config.cap_radius, 0.0);
    let r = center + Vector3::new(config.cap_fore_aft_offset, -config.cap_radius, 0.0);

    let cap = |prefix: &str| format!("{prefix}{index}");
    let mut parts = VertebraParts {
        index,
        kind,
        nodes: Vec::new(),
        groups: Vec::new(),
        hinge: None,
    };

    if kind == VertebraKind::Rotating {
        let gap = Vector3::new(config.rotating_center_half_gap, 0.0, 0.0);
        let driving_center = format!("C{index}a");
        let driven_center = format!("C{index}b");
        parts.nodes = vec![
            (driving_center.clone(), center - gap, center_mass / 2.0),
            (cap("T"), t, cap_mass),
            (cap("B"), b, cap_mass),
            (driven_center.clone(), center + gap, center_mass / 2.0),
            (cap("L"), l, cap_mass),
            (cap("R"), r, cap_mass),
        ];
        let driving_group = format!("vertebra-{index}-driving");
        let driven_group = format!("vertebra-{index}-driven");
        parts.groups = vec![
            (driving_group.clone(), vec![driving_center, cap("T"), cap("B")]),
            (driven_group.clone(), vec![driven_center, cap("L"), cap("R")]),
        ];
        parts.hinge = Some(VertebraHinge {
            axis: Unit::new_normalize(Vector3::x()),
            pivot: center,
            driving_group,
            driven_group,
        });
    } else {
        parts.nodes = vec![
            (cap("C"), center, center_mass),
            (cap("T"), t, cap_mass),
            (cap("B"), b, cap_mass),
            (cap("L"), l, cap_mass),
            (cap("R"), r, cap_mass),
        ];
        parts.groups = vec![(
            format!("vertebra-{index}"),
            vec![cap("C"), cap("T"), cap("B"), cap("L"), cap("R")],
        )];
    }
    Ok(parts)
}

/// Incrementally assembles a [`StructureGraph`] from labeled parts.
struct Builder {
    graph: StructureGraph,
}

impl Builder {
    fn new(config: &LaikaConfig) -> Builder {
        let mut graph = StructureGraph::default();
        graph
            .materials
            .insert(MaterialTag::Silicone, config.silicone.clone());
        graph.materials.insert(MaterialTag::BunaN, config.buna_n.clone());
        graph
            .materials
            .insert(MaterialTag::MechanicalSpring, config.spring.clone());
        Builder { graph }
    }

    fn add_node(&mut self, label: &str, position: Vector3<f64>, mass: f64) -> NodeId {
        let id = NodeId(self.graph.nodes.len());
        self.graph.nodes.push(Node {
            position,
            velocity: Vector3::zeros(),
            mass,
            anchored: false,
        });
        self.graph.labels.insert(label.to_string(), id);
        id
    }

    fn id(&self, label: &str) -> NodeId {
        self.graph
            .node_by_label(label)
            .unwrap_or_else(|| panic!("builder referenced unknown label {label}"))
    }

    /// Adds a cable spanning its build-pose endpoints with a rest length
    /// short enough that the cable carries `pretension_force` at the build
    /// pose. Damping follows the local-mass rule c = 2·√(k·m̄)·ratio with m̄
    /// the mean endpoint mass.
    fn add_cable(
        &mut self,
        a: &str,
        b: &str,
        stiffness: f64,
        role: CableRole,
        material: MaterialTag,
        pretension_force: f64,
        damping_ratio: f64,
    ) {
        let (ia, ib) = (self.id(a), self.id(b));
        let span =
            (self.graph.nodes[ib.index()].position - self.graph.nodes[ia.index()].position).norm();
        let stretch = pretension_force / stiffness;
        assert!(
            span > 2.0 * stretch,
            "cable {a}-{b} span {span} too short for pretension stretch {stretch}"
        );
        let rest = span - stretch;
        let m_local =
            0.5 * (self.graph.nodes[ia.index()].mass + self.graph.nodes[ib.index()].mass);
        let damping = 2.0 * (stiffness * m_local).sqrt() * damping_ratio;
        self.graph.cables.push(Cable {
            a: ia,
            b: ib,
            stiffness,
            damping,
            rest_length: rest,
            original_rest_length: rest,
            role,
            material,
        });
    }

    fn add_group(&mut self, label: &str, member_labels: &[String]) -> usize {
        let members: Vec<NodeId> = member_labels.iter().map(|l| self.id(l)).collect();
        let reference_positions = members
            .iter()
            .map(|id| self.graph.nodes[id.index()].position)
            .collect();
        self.graph.rigid_groups.push(RigidGroup {
            label: label.to_string(),
            members,
            reference_positions,
        });
        self.graph.rigid_groups.len() - 1
    }

    fn add_node_set(&mut self, name: &str, labels: &[String]) {
        let ids = labels.iter().map(|l| self.id(l)).collect();
        self.graph.node_sets.insert(name.to_string(), ids);
    }
}

/// Scales every node mass so the total is exactly `target`.
fn normalize_total_mass(graph: &mut StructureGraph, target: f64) {
    let sum = graph.total_mass();
    if sum > 0.0 {
        let scale = target / sum;
        for node in &mut graph.nodes {
            node.mass *= scale;
        }
    }
}

fn vertebra_node_labels(parts: &[VertebraParts]) -> Vec<String> {
    parts
        .iter()
        .flat_map(|p| p.nodes.iter().map(|(l, _, _)| l.clone()))
        .collect()
}

/// Adds the 16 saddle cables and the horizontal runs for a five-vertebra
/// chain whose nodes are already in the builder.
///
/// Each horizontal connection is a twin path between the same pair of caps:
/// a stiff actuated cable in series with a mechanical spring, whose rest
/// length the spool commands, and a passive elastomer lattice run, whose
/// rest length never changes. Only the elastomer runs swap stiffness across
/// tension test points; the spring runs keep their exact rating, so spool
/// authority is the same at every test point while the lattice's resistance
/// scales with the point.
fn add_spine_cables(builder: &mut Builder, config: &LaikaConfig) {
    // Saddles: each vertebra's forward caps (L, R) to the next vertebra's
    // rearward caps (T, B), four per adjacent pair. Saddles are plain
    // elastomer lattice, with no actuated twin.
    for n in 1..=4u8 {
        for src in ["L", "R"] {
            for dst in ["T", "B"] {
                builder.add_cable(
                    &format!("{src}{n}"),
                    &format!("{dst}{}", n + 1),
                    config.silicone.k_mean,
                    CableRole::Saddle,
                    MaterialTag::Silicone,
                    config.pretension_force,
                    config.cable_damping_ratio,
                );
            }
        }
    }

    // Horizontal sets fan out from their motor vertebra to the other four.
    // Grooves are assigned nearest target first; ties break toward the hip.
    let sets: [(HorizontalSide, &str, u8); 4] = [
        (HorizontalSide::Top, "T", 2),
        (HorizontalSide::Bottom, "B", 2),
        (HorizontalSide::Left, "L", 4),
        (HorizontalSide::Right, "R", 4),
    ];
    for (side, prefix, anchor) in sets {
        let mut targets: Vec<u8> = (1..=5u8).filter(|&i| i != anchor).collect();
        targets.sort_by_key(|&i| (i.abs_diff(anchor), i));
        // The ventral strip of lattice is the stiffer rubber; it carries the
        // spine's weight from below.
        let lattice_material = if side == HorizontalSide::Bottom {
            MaterialTag::BunaN
        } else {
            MaterialTag::Silicone
        };
        let lattice_k = match lattice_material {
            MaterialTag::BunaN => config.buna_n.k_mean,
            _ => config.silicone.k_mean,
        };
        for (slot, target) in targets.into_iter().enumerate() {
            let from = format!("{prefix}{anchor}");
            let to = format!("{prefix}{target}");
            builder.add_cable(
                &from,
                &to,
                config.spring.k_mean,
                CableRole::Horizontal {
                    side,
                    groove: (slot + 1) as u8,
                },
                MaterialTag::MechanicalSpring,
                config.pretension_force,
                config.cable_damping_ratio,
            );
            builder.add_cable(
                &from,
                &to,
                lattice_k,
                CableRole::StructuralPassive,
                lattice_material,
                config.pretension_force,
                config.cable_damping_ratio,
            );
        }
    }
}

/// Adds the compression stops between adjacent vertebra centres. The arms
/// of neighbouring vertebrae interleave, so bodies pressed together make
/// rigid contact well before their centres meet; the stops carry that
/// contact so the frames can lean against the spine without the lattice
/// folding. The hinge pair is excluded because the joint hardware already
/// fixes the gap between the halves.
fn add_spine_bumpers(builder: &mut Builder, config: &LaikaConfig) {
    for (a, b) in [("C1", "C2"), ("C2", "C3a"), ("C3b", "C4"), ("C4", "C5")] {
        let (ia, ib) = (builder.id(a), builder.id(b));
        builder.graph.bumpers.push(Bumper {
            a: ia,
            b: ib,
            engage_distance: config.bumper_engage_distance,
        });
    }
}

fn add_vertebra_nodes(builder: &mut Builder, parts: &VertebraParts) {
    for (label, position, mass) in &parts.nodes {
        builder.add_node(label, *position, *mass);
    }
}

/// Registers a vertebra's own rigid groups and, for the rotating vertebra,
/// the hinge joint.
fn add_vertebra_groups(builder: &mut Builder, parts: &VertebraParts) {
    let mut group_index = std::collections::BTreeMap::new();
    for (label, members) in &parts.groups {
        let gi = builder.add_group(label, members);
        group_index.insert(label.clone(), gi);
    }
    if let Some(hinge) = &parts.hinge {
        builder.graph.rotating_joint = Some(RotatingJoint {
            driving_group: group_index[&hinge.driving_group],
            driven_group: group_index[&hinge.driven_group],
            axis: hinge.axis,
            pivot: hinge.pivot,
        });
    }
}

/// Builds the five-vertebra spine fragment: 26 nodes, 32 cables, one rigid
/// group per vertebra half, and the center hinge. No frames or feet; see
/// [`build_laika`] for the complete robot.
pub fn build_spine(config: &LaikaConfig) -> Result<StructureGraph, ModelError> {
    config.validate()?;
    let mut builder = Builder::new(config);
    let mut all_parts = Vec::new();
    for index in 1..=5u8 {
        let parts = build_vertebra(index, expected_vertebra_kind(index).unwrap(), config)?;
        add_vertebra_nodes(&mut builder, &parts);
        all_parts.push(parts);
    }
    for parts in &all_parts {
        add_vertebra_groups(&mut builder, parts);
    }
    add_spine_cables(&mut builder, config);
    add_spine_bumpers(&mut builder, config);
    builder.add_node_set("spine", &vertebra_node_labels(&all_parts));
    Ok(builder.graph)
}

/// Builds the complete robot: spine, shoulder and hip frames with their
/// legs and feet, all cables, and rigid groups. The end vertebrae are merged
/// into their frames' rigid groups, which is how the spine mounts to the
/// legs. The returned graph passes [`crate::structure::validate_structure`].
pub fn build_laika(config: &LaikaConfig) -> Result<StructureGraph, ModelError> {
    config.validate()?;
    let mut builder = Builder::new(config);

    let mut all_parts = Vec::new();
    for index in 1..=5u8 {
        let parts = build_vertebra(index, expected_vertebra_kind(index).unwrap(), config)?;
        add_vertebra_nodes(&mut builder, &parts);
        all_parts.push(parts);
    }

    // Leg frames: a crossbar node above each foot at hip height. Frame mass
    // splits over the two crossbar nodes; each leg contributes its upper
    // share to the crossbar node and the rest to the foot.
    let total = config.total_mass;
    let leg_mass = total * config.mass_fractions.legs / 4.0;
    let foot_mass = leg_mass * config.leg_foot_mass_fraction;
    let upper_leg_mass = leg_mass - foot_mass;
    let frame_node_mass = |frame_fraction: f64| total * frame_fraction / 2.0 + upper_leg_mass;

    let wb = config.foot_half_wheelbase;
    let track = config.foot_half_track;
    let hip_z = config.hip_height;
    let shoulder_mass = frame_node_mass(config.mass_fractions.shoulder_frame);
    let hip_mass = frame_node_mass(config.mass_fractions.hip_frame);

    // Feet: A front right, B front left, C back right, D back left.
    // +y is the robot's left.
    builder.add_node("shoulderL", Vector3::new(wb, track, hip_z), shoulder_mass);
    builder.add_node("shoulderR", Vector3::new(wb, -track, hip_z), shoulder_mass);
    builder.add_node("footB", Vector3::new(wb, track, 0.0), foot_mass);
    builder.add_node("footA", Vector3::new(wb, -track, 0.0), foot_mass);
    builder.add_node("hipL", Vector3::new(-wb, track, hip_z), hip_mass);
    builder.add_node("hipR", Vector3::new(-wb, -track, hip_z), hip_mass);
    builder.add_node("footD", Vector3::new(-wb, track, 0.0), foot_mass);
    builder.add_node("footC", Vector3::new(-wb, -track, 0.0), foot_mass);

    normalize_total_mass(&mut builder.graph, total);

    // Interior vertebrae keep their own rigid groups; the end vertebrae are
    // absorbed into the frame groups.
    for parts in &all_parts {
        if parts.index == 1 || parts.index == 5 {
            continue;
        }
        add_vertebra_groups(&mut builder, parts);
    }
    let vertebra_labels = |index: u8| -> Vec<String> {
        all_parts[usize::from(index) - 1]
            .nodes
            .iter()
            .map(|(l, _, _)| l.clone())
            .collect()
    };
    let mut shoulder_members: Vec<String> = vertebra_labels(5);
    shoulder_members.extend(["shoulderL", "shoulderR", "footB", "footA"].map(String::from));
    builder.add_group("shoulder-frame", &shoulder_members);
    let mut hip_members: Vec<String> = vertebra_labels(1);
    hip_members.extend(["hipL", "hipR", "footC", "footD"].map(String::from));
    builder.add_group("hip-frame", &hip_members);

    add_spine_cables(&mut builder, config);
    add_spine_bumpers(&mut builder, config);

    builder.add_node_set("spine", &vertebra_node_labels(&all_parts));
    builder.add_node_set(
        "feet",
        &["footA", "footB", "footC", "footD"].map(String::from),
    );
    builder.add_node_set("shoulder-frame", &shoulder_members);
    builder.add_node_set("hip-frame", &hip_members);

    let report = crate::structure::validate_structure(&builder.graph);
    if !report.is_ok() {
        return Err(ModelError::InvalidGraph(report.violations));
    }
    Ok(builder.graph)
}

/// Returns a copy of the graph with every lattice cable's stiffness set to
/// the tension point's value for its material. Mechanical-spring cables and
/// all rest lengths are untouched; damping is rescaled by √(k_new/k_old) so
/// the damping ratio rule keeps holding. Applying the same point twice is a
/// no-op.
pub fn apply_tension_test_point(
    graph: &StructureGraph,
    point: TensionPoint,
) -> Result<StructureGraph, ModelError> {
    let silicone_k = point.silicone_k();
    let buna_n_k = point.buna_n_k();
    if silicone_k <= 0.0 {
        return Err(ModelError::BadTensionPoint {
            material: "silicone",
            value: silicone_k,
        });
    }
    if buna_n_k <= 0.0 {
        return Err(ModelError::BadTensionPoint {
            material: "buna-n",
            value: buna_n_k,
        });
    }
    let mut out = graph.clone();
    for cable in &mut out.cables {
        let new_k = match cable.material {
            MaterialTag::Silicone => silicone_k,
            MaterialTag::BunaN => buna_n_k,
            MaterialTag::MechanicalSpring => continue,
        };
        if cable.stiffness != new_k {
            cable.damping *= (new_k / cable.stiffness).sqrt();
            cable.stiffness = new_k;
        }
    }
    Ok(out)
}

/// Feet positions in the horizontal plane, in foot order A, B, C, D.
pub fn foot_node_ids(graph: &StructureGraph) -> Option<[NodeId; 4]> {
    Some([
        graph.node_by_label("footA")?,
        graph.node_by_label("footB")?,
        graph.node_by_label("footC")?,
        graph.node_by_label("footD")?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{settle, SimParams, SimState};
    use crate::structure::{center_of_mass, validate_structure, CableRole};
    use approx::assert_relative_eq;

    #[test]
    fn passive_end_vertebra_is_one_group_of_five() {
        let parts = build_vertebra(1, VertebraKind::Passive, &LaikaConfig::default()).unwrap();
        assert_eq!(parts.groups.len(), 1);
        assert_eq!(parts.nodes.len(), 5);
        for label in ["C1", "T1", "B1", "L1", "R1"] {
            assert!(parts.nodes.iter().any(|(l, _, _)| l == label), "missing {label}");
        }
        assert!(parts.hinge.is_none());
    }

    #[test]
    fn rotating_vertebra_splits_into_hinged_halves() {
        let parts = build_vertebra(3, VertebraKind::Rotating, &LaikaConfig::default()).unwrap();
        assert_eq!(parts.groups.len(), 2);
        assert_eq!(parts.nodes.len(), 6);
        let hinge = parts.hinge.expect("rotating vertebra must carry a hinge");
        // Hinge must run along the spine axis (x).
        assert_relative_eq!(hinge.axis.into_inner().dot(&Vector3::x()).abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let err = build_vertebra(3, VertebraKind::Passive, &LaikaConfig::default()).unwrap_err();
        assert!(matches!(err, ModelError::VertebraKindMismatch { index: 3, .. }));
        let err = build_vertebra(6, VertebraKind::Passive, &LaikaConfig::default()).unwrap_err();
        assert!(matches!(err, ModelError::BadVertebraIndex(6)));
    }

    #[test]
    fn spine_has_sixteen_saddles_and_sixteen_twinned_horizontals() {
        let spine = build_spine(&LaikaConfig::default()).unwrap();
        let saddles = spine
            .cables
            .iter()
            .filter(|c| c.role == CableRole::Saddle)
            .count();
        let horizontals = spine
            .cables
            .iter()
            .filter(|c| matches!(c.role, CableRole::Horizontal { .. }))
            .count();
        let lattice_runs = spine
            .cables
            .iter()
            .filter(|c| c.role == CableRole::StructuralPassive)
            .count();
        assert_eq!(saddles, 16);
        assert_eq!(horizontals, 16);
        assert_eq!(lattice_runs, 16);
        assert_eq!(spine.cables.len(), 48);
        assert_eq!(spine.nodes.len(), 26);
    }

    #[test]
    fn every_horizontal_cable_has_a_passive_lattice_twin() {
        let spine = build_spine(&LaikaConfig::default()).unwrap();
        for cable in &spine.cables {
            let CableRole::Horizontal { side, .. } = cable.role else {
                continue;
            };
            assert_eq!(cable.material, MaterialTag::MechanicalSpring);
            let twin = spine
                .cables
                .iter()
                .find(|c| {
                    c.role == CableRole::StructuralPassive
                        && ((c.a == cable.a && c.b == cable.b)
                            || (c.a == cable.b && c.b == cable.a))
                })
                .expect("actuated run must have a lattice run on the same caps");
            let expected = if side == HorizontalSide::Bottom {
                MaterialTag::BunaN
            } else {
                MaterialTag::Silicone
            };
            assert_eq!(twin.material, expected);
        }
    }

    #[test]
    fn one_forward_cap_feeds_both_rear_caps_of_the_next_vertebra() {
        let spine = build_spine(&LaikaConfig::default()).unwrap();
        let l1 = spine.node_by_label("L1").unwrap();
        let t2 = spine.node_by_label("T2").unwrap();
        let b2 = spine.node_by_label("B2").unwrap();
        let saddle_between = |a: NodeId, b: NodeId| {
            spine
                .cables
                .iter()
                .any(|c| c.role == CableRole::Saddle && ((c.a == a && c.b == b) || (c.a == b && c.b == a)))
        };
        assert!(saddle_between(l1, t2));
        assert!(saddle_between(l1, b2));
    }

    #[test]
    fn horizontal_sets_fan_out_from_their_motor_vertebra() {
        let spine = build_spine(&LaikaConfig::default()).unwrap();
        for (side, anchor_label) in [
            (HorizontalSide::Top, "T2"),
            (HorizontalSide::Bottom, "B2"),
            (HorizontalSide::Left, "L4"),
            (HorizontalSide::Right, "R4"),
        ] {
            let anchor = spine.node_by_label(anchor_label).unwrap();
            let set: Vec<&Cable> = spine
                .cables
                .iter()
                .filter(|c| c.role.is_horizontal(side))
                .collect();
            assert_eq!(set.len(), 4, "{side:?}");
            for cable in &set {
                assert!(
                    cable.a == anchor || cable.b == anchor,
                    "{side:?} cable must touch its motor at {anchor_label}"
                );
            }
        }
    }

    #[test]
    fn groove_order_follows_target_distance() {
        // Spool groove radii are in ratio (1,1,2,3); the cable in a bigger
        // groove must reach a proportionally farther vertebra so one motor
        // turn bends the spine evenly.
        let spine = build_spine(&LaikaConfig::default()).unwrap();
        let anchor_of = |side: HorizontalSide| match side {
            HorizontalSide::Top | HorizontalSide::Bottom => 2u8,
            _ => 4u8,
        };
        let index_of_label = |label_prefix: &str, id: NodeId| -> Option<u8> {
            (1..=5u8).find(|i| spine.node_by_label(&format!("{label_prefix}{i}")) == Some(id))
        };
        for side in HorizontalSide::ALL {
            let prefix = match side {
                HorizontalSide::Top => "T",
                HorizontalSide::Bottom => "B",
                HorizontalSide::Left => "L",
                HorizontalSide::Right => "R",
            };
            let anchor = anchor_of(side);
            let mut by_groove: Vec<(u8, u8)> = Vec::new(); // (groove, distance)
            for cable in &spine.cables {
                if let CableRole::Horizontal { side: s, groove } = cable.role {
                    if s != side {
                        continue;
                    }
                    let target = [cable.a, cable.b]
                        .into_iter()
                        .filter_map(|id| index_of_label(prefix, id))
                        .find(|&i| i != anchor)
                        .expect("horizontal cable must end on a non-anchor vertebra");
                    by_groove.push((groove, target.abs_diff(anchor)));
                }
            }
            by_groove.sort();
            let distances: Vec<u8> = by_groove.iter().map(|&(_, d)| d).collect();
            assert_eq!(distances, vec![1, 1, 2, 3], "{side:?}");
        }
    }

    #[test]
    fn lattice_materials_follow_their_strip() {
        let spine = build_spine(&LaikaConfig::default()).unwrap();
        for cable in &spine.cables {
            match cable.material {
                MaterialTag::BunaN => assert_relative_eq!(cable.stiffness, 810.0),
                MaterialTag::Silicone => assert_relative_eq!(cable.stiffness, 237.0),
                MaterialTag::MechanicalSpring => {
                    assert_relative_eq!(cable.stiffness, 187.0);
                    assert!(matches!(cable.role, CableRole::Horizontal { .. }));
                }
            }
        }
        // The stiff rubber sits only under the spine.
        let bottoms = spine
            .cables
            .iter()
            .filter(|c| c.material == MaterialTag::BunaN)
            .count();
        assert_eq!(bottoms, 4);
    }

    #[test]
    fn full_robot_validates_and_hits_exact_total_mass() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        assert!(validate_structure(&graph).is_ok());
        assert_relative_eq!(graph.total_mass(), 1.62, epsilon = 1e-9);
        assert_eq!(graph.nodes.len(), 34);
        assert_eq!(graph.cables.len(), 48);
        assert_eq!(graph.rigid_groups.len(), 6);
    }

    #[test]
    fn foot_index_matches_all_order() {
        for (i, foot) in Foot::ALL.iter().enumerate() {
            assert_eq!(foot.index(), i);
        }
    }

    #[test]
    fn feet_start_on_the_ground() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        for foot in Foot::ALL {
            let id = graph.node_by_label(foot.label()).unwrap();
            assert!(
                graph.nodes[id.index()].position.z.abs() < 1e-6,
                "{foot} starts at z = {}",
                graph.nodes[id.index()].position.z
            );
        }
    }

    #[test]
    fn center_of_mass_sits_just_ahead_of_midspan() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        let positions: Vec<Vector3<f64>> = graph.nodes.iter().map(|n| n.position).collect();
        let com = center_of_mass(&graph, &positions, None).unwrap();
        assert!(
            com.x > 0.0 && com.x <= 0.01,
            "com.x = {} should be within 1 cm forward of the midpoint",
            com.x
        );
        assert!(com.y.abs() < 1e-12, "com.y = {} should be on the midline", com.y);
    }

    #[test]
    fn built_robot_is_left_right_mirror_symmetric() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        let mirror_label = |label: &str| -> String {
            match label {
                "footA" => "footB".to_string(),
                "footB" => "footA".to_string(),
                "footC" => "footD".to_string(),
                "footD" => "footC".to_string(),
                "shoulderL" => "shoulderR".to_string(),
                "shoulderR" => "shoulderL".to_string(),
                "hipL" => "hipR".to_string(),
                "hipR" => "hipL".to_string(),
                l if l.starts_with('L') => format!("R{}", &l[1..]),
                l if l.starts_with('R') => format!("L{}", &l[1..]),
                other => other.to_string(),
            }
        };

        // Nodes: the mirror partner must exist at the reflected position
        // with the same mass.
        let mut partner = std::collections::BTreeMap::new();
        for (label, &id) in &graph.labels {
            let mirrored = mirror_label(label);
            let pid = graph
                .node_by_label(&mirrored)
                .unwrap_or_else(|| panic!("no mirror partner for {label}"));
            partner.insert(id, pid);
            let n = &graph.nodes[id.index()];
            let p = &graph.nodes[pid.index()];
            assert_relative_eq!(n.position.x, p.position.x, epsilon = 1e-9);
            assert_relative_eq!(n.position.y, -p.position.y, epsilon = 1e-9);
            assert_relative_eq!(n.position.z, p.position.z, epsilon = 1e-9);
            assert_relative_eq!(n.mass, p.mass, epsilon = 1e-9);
        }

        // Cables: for every cable the mirrored cable must exist with the
        // same parameters and the left/right role swapped.
        let mirror_role = |role: CableRole| -> CableRole {
            match role {
                CableRole::Horizontal { side, groove } => CableRole::Horizontal {
                    side: side.mirrored(),
                    groove,
                },
                other => other,
            }
        };
        for cable in &graph.cables {
            let (ma, mb) = (partner[&cable.a], partner[&cable.b]);
            let want_role = mirror_role(cable.role);
            let found = graph.cables.iter().find(|c| {
                ((c.a == ma && c.b == mb) || (c.a == mb && c.b == ma)) && c.role == want_role
            });
            let twin = found.unwrap_or_else(|| {
                panic!("no mirror twin for cable {:?}-{:?} ({:?})", cable.a, cable.b, cable.role)
            });
            assert_relative_eq!(cable.stiffness, twin.stiffness, epsilon = 1e-9);
            assert_relative_eq!(cable.rest_length, twin.rest_length, epsilon = 1e-9);
            assert_relative_eq!(cable.damping, twin.damping, epsilon = 1e-9);
        }
    }

    #[test]
    fn tension_point_application_is_idempotent_and_scales_both_materials() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        let high = apply_tension_test_point(&graph, TensionPoint::High).unwrap();
        for cable in &high.cables {
            match cable.material {
                MaterialTag::Silicone => assert_relative_eq!(cable.stiffness, 258.0),
                MaterialTag::BunaN => assert_relative_eq!(cable.stiffness, 1073.0),
                MaterialTag::MechanicalSpring => assert_relative_eq!(cable.stiffness, 187.0),
            }
        }
        let again = apply_tension_test_point(&high, TensionPoint::High).unwrap();
        assert_eq!(high, again);

        let mean = apply_tension_test_point(&graph, TensionPoint::Mean).unwrap();
        assert_eq!(graph, mean, "mean point equals the build stiffness");
    }

    #[test]
    fn mechanical_spring_cables_keep_their_exact_rating() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        let low = apply_tension_test_point(&graph, TensionPoint::Low).unwrap();
        let high = apply_tension_test_point(&graph, TensionPoint::High).unwrap();
        for (before, (lo, hi)) in graph.cables.iter().zip(low.cables.iter().zip(&high.cables)) {
            if before.material != MaterialTag::MechanicalSpring {
                continue;
            }
            assert_relative_eq!(lo.stiffness, 187.0);
            assert_relative_eq!(hi.stiffness, 187.0);
            assert_relative_eq!(lo.damping, before.damping);
            assert_relative_eq!(hi.damping, before.damping);
        }
    }

    #[test]
    fn tension_application_preserves_damping_ratio() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        let high = apply_tension_test_point(&graph, TensionPoint::High).unwrap();
        for (before, after) in graph.cables.iter().zip(&high.cables) {
            // c/√k is the mass-and-ratio part of the damping rule and must
            // survive retensioning.
            assert_relative_eq!(
                before.damping / before.stiffness.sqrt(),
                after.damping / after.stiffness.sqrt(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rejected_configs_name_the_offending_field() {
        let mut config = LaikaConfig::default();
        config.mass_fractions.spine = 0.5;
        let err = build_laika(&config).unwrap_err();
        match err {
            ModelError::BadConfig(msg) => assert!(msg.contains("mass fractions")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn settled_robot_stands_on_all_four_feet() {
        let graph = build_laika(&LaikaConfig::default()).unwrap();
        let params = SimParams::default();
        let mut state = SimState::initial(&graph);
        settle(&graph, &mut state, &params, 20.0).expect("default build must settle");

        let ids = foot_node_ids(&graph).unwrap();
        for (foot, id) in Foot::ALL.iter().zip(ids) {
            let z = state.positions[id.index()].z;
            assert!(
                (-0.002..=0.0).contains(&z),
                "foot {foot} ended at z = {z}, expected light penalty penetration"
            );
        }

        let com = center_of_mass(&graph, &state.positions, None).unwrap();
        let config = LaikaConfig::default();
        assert!(com.x.abs() < config.foot_half_wheelbase);
        assert!(com.y.abs() < config.foot_half_track);
    }
}
