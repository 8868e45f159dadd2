//! Simulator and experiment harness for a quadruped robot with a
//! cable-driven tensegrity spine.
//!
//! The robot stands on four stiff legs; its back is a chain of five rigid
//! vertebrae suspended in a lattice of elastic cables. Two kinds of commands
//! actuate it: retracting one lateral cable strip bends the spine sideways,
//! and a hinge in the center vertebra twists the front half of the lattice
//! against the back half. Bend plus twist shifts weight off one foot, which
//! is the primitive this crate measures: for each bend/spin combination and
//! a range of lattice stiffnesses, the harness ramps the twist and records
//! the hinge angle at which a foot lifts clear of the ground.
//!
//! Modules:
//!
//! * [`structure`]: graph types (nodes, cables, rigid groups), validation.
//! * [`dynamics`]: forces, semi-implicit Euler stepping, settle.
//! * [`model`]: builds the robot from a [`model::LaikaConfig`].
//! * [`actuation`]: bend/spool/rotation commands.
//! * [`harness`]: foot-lift test protocol, sweep, hardware comparison.
//! * [`config`], [`trace`], [`report`]: run configuration and file output.

pub mod actuation;
pub mod config;
pub mod dynamics;
pub mod harness;
pub mod model;
pub mod report;
mod rigid;
pub mod structure;
pub mod trace;
