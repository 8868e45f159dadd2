//! JSON run reports.
//!
//! A report bundles everything needed to audit and regenerate a batch of
//! runs: the effective configuration with every default filled in, one
//! entry per run, per-foot angle summaries against the reference intervals,
//! and (for comparison runs) the ranked operating points. The document
//! carries a schema version and re-serializes byte-identically after a
//! parse, so reports can be diffed and archived.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::harness::{FootLiftResult, HardwareReference, TensionPointAssessment};
use crate::model::Foot;

/// Version of the report document layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Report file failures.
#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("report {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("report parse: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Top-level report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: u32,
    /// The full configuration the runs used, defaults included.
    pub effective_config: serde_json::Value,
    pub runs: Vec<RunEntry>,
    /// One summary per foot in [`Foot::ALL`] order.
    pub foot_summaries: Vec<FootSummary>,
    /// Present only for comparison runs.
    pub comparison: Option<ComparisonSection>,
}

/// One run's outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunEntry {
    /// Bend/spin label, e.g. `left-bend+ccw`.
    pub motion: String,
    pub target_foot: String,
    pub tension: String,
    /// Whether the first lift was the motion's target foot.
    pub intended_lift: bool,
    pub lifted_foot: Option<String>,
    /// |θ| at the confirmed lift, rad.
    pub lift_angle_rad: Option<f64>,
    /// Rotation-phase time of the confirmed lift, s.
    pub lift_time_s: Option<f64>,
    pub settle_duration_s: f64,
    pub bend_settle_duration_s: f64,
    pub simulated_duration_s: f64,
    pub wall_seconds: f64,
    pub sample_count: usize,
    pub degenerate_cable_events: u64,
    pub trace_path: Option<String>,
}

/// Lift-angle summary for one foot across a batch, next to the reference
/// intervals for the same foot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FootSummary {
    pub foot: String,
    pub hardware_min_rad: f64,
    pub hardware_max_rad: f64,
    pub prior_sim_min_rad: f64,
    pub prior_sim_max_rad: f64,
    /// Smallest/largest lift angle among this foot's intended lifts;
    /// absent when no run lifted it as intended.
    pub sim_min_rad: Option<f64>,
    pub sim_max_rad: Option<f64>,
    pub intended_lift_runs: usize,
    pub total_runs: usize,
}

/// Hardware comparison: ranked operating points, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonSection {
    pub tolerance_rad: f64,
    pub best_tension: String,
    pub ranking: Vec<RankedTension>,
}

/// One operating point's score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankedTension {
    pub tension: String,
    pub intended_lifts: usize,
    pub within_count: usize,
    /// Sum of per-foot distances to hardware, with misses penalized.
    pub total_distance_rad: f64,
    pub feet: Vec<RankedFoot>,
}

/// One foot within a ranked operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankedFoot {
    pub foot: String,
    pub lifted_intended_foot: bool,
    pub lift_angle_rad: Option<f64>,
    pub lift_time_s: Option<f64>,
    pub hardware_min_rad: f64,
    pub hardware_max_rad: f64,
    pub hardware_distance_rad: Option<f64>,
    pub within_tolerance: bool,
}

/// Assembles a report. `trace_paths` pairs with `results` by index; pass
/// `None` entries for runs whose trace was not written. `assessment`
/// carries the comparison section inputs: ranked points (best first) and
/// the tolerance they were scored at.
#[must_use]
pub fn build_report(
    effective_config: serde_json::Value,
    results: &[FootLiftResult],
    trace_paths: &[Option<String>],
    assessment: Option<(&[TensionPointAssessment], f64)>,
) -> Report {
    assert_eq!(
        results.len(),
        trace_paths.len(),
        "one trace path slot per run"
    );
    let reference = HardwareReference::standard();

    let runs = results
        .iter()
        .zip(trace_paths)
        .map(|(r, trace_path)| {
            let target = r.target_foot();
            RunEntry {
                motion: r.motion.label(),
                target_foot: target.to_string(),
                tension: r.tension.name(),
                intended_lift: r.lift.is_some_and(|l| l.foot == target),
                lifted_foot: r.lift.map(|l| l.foot.to_string()),
                lift_angle_rad: r.lift.map(|l| l.angle),
                lift_time_s: r.lift.map(|l| l.time),
                settle_duration_s: r.settle_duration,
                bend_settle_duration_s: r.bend_settle_duration,
                simulated_duration_s: r.simulated_duration,
                wall_seconds: r.wall_seconds,
                sample_count: r.samples.len(),
                degenerate_cable_events: r.degenerate_cable_events,
                trace_path: trace_path.clone(),
            }
        })
        .collect();

    let foot_summaries = Foot::ALL
        .iter()
        .map(|&foot| {
            let hardware = reference.hardware_for(foot);
            let prior_sim = reference.prior_sim_for(foot);
            let mut angles: Vec<f64> = Vec::new();
            let mut total_runs = 0;
            for r in results {
                if r.target_foot() != foot {
                    continue;
                }
                total_runs += 1;
                if let Some(lift) = r.lift {
                    if lift.foot == foot {
                        angles.push(lift.angle);
                    }
                }
            }
            FootSummary {
                foot: foot.to_string(),
                hardware_min_rad: hardware.min,
                hardware_max_rad: hardware.max,
                prior_sim_min_rad: prior_sim.min,
                prior_sim_max_rad: prior_sim.max,
                sim_min_rad: angles.iter().copied().reduce(f64::min),
                sim_max_rad: angles.iter().copied().reduce(f64::max),
                intended_lift_runs: angles.len(),
                total_runs,
            }
        })
        .collect();

    let comparison = assessment.and_then(|(ranking, tolerance_rad)| {
        let best = ranking.first()?;
        Some(ComparisonSection {
            tolerance_rad,
            best_tension: best.tension.name(),
            ranking: ranking
                .iter()
                .map(|a| RankedTension {
                    tension: a.tension.name(),
                    intended_lifts: a.intended_lifts,
                    within_count: a.within_count,
                    total_distance_rad: a.total_distance,
                    feet: a
                        .feet
                        .iter()
                        .map(|f| RankedFoot {
                            foot: f.foot.to_string(),
                            lifted_intended_foot: f.lifted_intended_foot,
                            lift_angle_rad: f.lift.map(|l| l.angle),
                            lift_time_s: f.lift.map(|l| l.time),
                            hardware_min_rad: f.hardware.min,
                            hardware_max_rad: f.hardware.max,
                            hardware_distance_rad: f.hardware_distance,
                            within_tolerance: f.within_tolerance,
                        })
                        .collect(),
                })
                .collect(),
        })
    });

    Report {
        schema: REPORT_SCHEMA,
        effective_config,
        runs,
        foot_summaries,
        comparison,
    }
}

impl Report {
    /// Pretty JSON with a trailing newline. Serialization is deterministic
    /// and stable under parse/serialize round trips.
    #[must_use]
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes infallibly");
        text.push('\n');
        text
    }
}

/// Parses a report document.
pub fn parse_report(text: &str) -> Result<Report, ReportError> {
    Ok(serde_json::from_str(text)?)
}

/// Writes a report file, creating parent directories as needed.
pub fn write_report(report: &Report, path: &Path) -> Result<(), ReportError> {
    let io_err = |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    std::fs::write(path, report.to_json_string()).map_err(io_err)
}

/// Reads and parses a report file.
pub fn read_report(path: &Path) -> Result<Report, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_report(&text)
}
