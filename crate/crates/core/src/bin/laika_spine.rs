//! Command-line front end for the foot-lifting experiments.
//!
//! Subcommands mirror the experiment protocol: `run` executes one motion at
//! one spring operating point, `sweep` covers all twenty combinations,
//! `compare` scores a sweep against the reference intervals, and
//! `scenario-obstacle` settles the robot with a block under one foot.
//! Every run writes a CSV trace and a `report.json` into the output
//! directory.
//!
//! Exit codes: 0 success, 1 run error, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use laika_spine::config::{load_config, ConfigError, ResolvedConfig, RunConfig};
use laika_spine::dynamics::{settle, GroundPatch, SimState};
use laika_spine::harness::{
    assess_tension_points, calibration_sweep, run_foot_lift_test, FootLiftResult,
    HardwareReference, HarnessError,
};
use laika_spine::model::{
    apply_tension_test_point, build_laika, foot_node_ids, Foot, TensionPoint,
};
use laika_spine::report::{build_report, write_report, Report};
use laika_spine::trace::write_trace;

#[derive(Parser)]
#[command(
    name = "laika-spine",
    version,
    about = "Cable-driven spine foot-lifting simulator",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one motion at one spring operating point.
    Run(CommonArgs),
    /// Run all four motions at all five spring operating points.
    Sweep(CommonArgs),
    /// Sweep, then rank the operating points against the reference data.
    Compare(CommonArgs),
    /// Settle the robot with a raised block under one foot.
    ScenarioObstacle(ObstacleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file; flags below override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Target foot (a|b|c|d) or a bend/spin pair like left-bend+cw.
    #[arg(long, value_name = "MOTION")]
    motion: Option<String>,
    /// Spring operating point: low|medLow|mean|medHigh|high.
    #[arg(long, value_name = "POINT")]
    tension: Option<String>,
    /// Output directory for traces and report.json.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Keep simulating to the end of the rotation ramp after a lift.
    #[arg(long)]
    full_trace: bool,
    /// Integration step override, s.
    #[arg(long, value_name = "S")]
    dt: Option<f64>,
}

#[derive(Args)]
struct ObstacleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Foot standing on the block.
    #[arg(long, value_name = "FOOT", default_value = "a")]
    foot: String,
    /// Block height override, m.
    #[arg(long, value_name = "M")]
    obstacle_height: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => single_run(&args),
        Command::Sweep(args) => batch(&args, false),
        Command::Compare(args) => batch(&args, true),
        Command::ScenarioObstacle(args) => obstacle_scenario(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl ToString) -> Failure {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn run(message: impl ToString) -> Failure {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::config(e)
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Failure {
        match e {
            // A structure that cannot be built is a configuration problem;
            // everything that happens during simulation is a run problem.
            HarnessError::Model(_) | HarnessError::BadParams(_) => Failure::config(e),
            _ => Failure::run(e),
        }
    }
}

/// Loads the config file (or `{}`), overlays the flags, and re-validates.
fn effective_config(args: &CommonArgs) -> Result<RunConfig, Failure> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("config {}: {e}", path.display())))?,
        None => "{}".to_string(),
    };
    let mut config = load_config(&text)?;
    if let Some(motion) = &args.motion {
        config.motion = motion.clone();
    }
    if let Some(tension) = &args.tension {
        config.tension = tension.clone();
    }
    if let Some(out) = &args.out {
        config.output_dir = out.display().to_string();
    }
    if args.full_trace {
        config.full_trace = true;
    }
    if let Some(dt) = args.dt {
        config.dt_s = dt;
    }
    config.validate()?;
    Ok(config)
}

fn trace_file_name(result: &FootLiftResult) -> String {
    format!(
        "trace_{}_{}.csv",
        result.target_foot().to_string().to_ascii_lowercase(),
        result.tension.name()
    )
}

fn describe(result: &FootLiftResult) -> String {
    let prefix = format!(
        "{} @ {} (target {})",
        result.motion.label(),
        result.tension.name(),
        result.target_foot()
    );
    match result.lift {
        Some(lift) => format!(
            "{prefix}: foot {} lifted at {:.4} rad, t = {:.2} s",
            lift.foot, lift.angle, lift.time
        ),
        None => format!("{prefix}: no foot lifted"),
    }
}

/// Writes all traces and the report, prints one line per run.
fn emit(
    config: &RunConfig,
    resolved: &ResolvedConfig,
    results: &[FootLiftResult],
    compare: bool,
) -> Result<Report, Failure> {
    let mut trace_paths = Vec::with_capacity(results.len());
    for result in results {
        let name = trace_file_name(result);
        let path = resolved.output_dir.join(&name);
        write_trace(&result.samples, &path).map_err(Failure::run)?;
        trace_paths.push(Some(name));
    }

    let assessment = compare.then(|| {
        assess_tension_points(
            results,
            &HardwareReference::standard(),
            resolved.comparison_tolerance,
        )
    });
    let report = build_report(
        config.effective_json(),
        results,
        &trace_paths,
        assessment
            .as_deref()
            .map(|ranking| (ranking, resolved.comparison_tolerance)),
    );
    let report_path = resolved.output_dir.join("report.json");
    write_report(&report, &report_path).map_err(Failure::run)?;

    for result in results {
        println!("{}", describe(result));
    }
    if let Some(comparison) = &report.comparison {
        println!("ranking (total distance to hardware, rad):");
        for point in &comparison.ranking {
            println!(
                "  {:<8} distance {:.4}, {}/4 intended lifts, {}/4 within ±{:.2}",
                point.tension,
                point.total_distance_rad,
                point.intended_lifts,
                point.within_count,
                comparison.tolerance_rad
            );
        }
        println!("best operating point: {}", comparison.best_tension);
    }
    println!("report: {}", report_path.display());
    Ok(report)
}

fn single_run(args: &CommonArgs) -> Result<(), Failure> {
    let config = effective_config(args)?;
    let resolved = config.resolve();
    let result = run_foot_lift_test(
        &resolved.robot,
        &resolved.sim,
        &resolved.harness,
        &resolved.motion,
        resolved.tension,
    )?;
    emit(&config, &resolved, &[result], false)?;
    Ok(())
}

fn batch(args: &CommonArgs, compare: bool) -> Result<(), Failure> {
    let config = effective_config(args)?;
    let resolved = config.resolve();
    let results = calibration_sweep(
        &resolved.robot,
        &resolved.sim,
        &resolved.harness,
        &TensionPoint::CANONICAL,
    )?;
    emit(&config, &resolved, &results, compare)?;
    Ok(())
}

fn obstacle_scenario(args: &ObstacleArgs) -> Result<(), Failure> {
    let config = effective_config(&args.common)?;
    let mut resolved = config.resolve();
    let foot = Foot::parse(&args.foot)
        .ok_or_else(|| Failure::config(format!("foot: expected a|b|c|d, got {:?}", args.foot)))?;
    let height = args.obstacle_height.unwrap_or(resolved.robot.obstacle_height);
    if !(height > 0.0) {
        return Err(Failure::config(format!(
            "obstacle height must be positive, got {height}"
        )));
    }

    let base = build_laika(&resolved.robot).map_err(HarnessError::from)?;
    let graph =
        apply_tension_test_point(&base, resolved.tension).map_err(HarnessError::from)?;
    let feet = foot_node_ids(&graph).ok_or(HarnessError::MissingFeet)?;
    let mut state = SimState::initial(&graph);

    // Block footprint centered under the chosen foot, comfortably larger
    // than any settling drift.
    let center = state.positions[feet[foot.index()].index()];
    let half = 0.06;
    resolved.sim.ground_patches.push(GroundPatch {
        min_x: center.x - half,
        max_x: center.x + half,
        min_y: center.y - half,
        max_y: center.y + half,
        height,
    });

    // Spawn with the chosen foot resting on the block top and the other
    // three feet level with it, then let the structure drop and settle.
    for p in &mut state.positions {
        p.z += height;
    }
    let settle_duration = settle(&graph, &mut state, &resolved.sim, resolved.harness.settle_limit)
        .map_err(HarnessError::from)?;

    let mut clearances = [0.0; 4];
    let mut contacts = [false; 4];
    for f in Foot::ALL {
        let p = state.positions[feet[f.index()].index()];
        let c = p.z - resolved.sim.ground_height_at(p.x, p.y);
        clearances[f.index()] = c;
        contacts[f.index()] = c <= 0.0;
    }

    let summary = serde_json::json!({
        "scenario": "obstacle",
        "foot": foot.to_string(),
        "obstacleHeightM": height,
        "tension": resolved.tension.name(),
        "settleDurationS": settle_duration,
        "footClearancesM": clearances,
        "contacts": contacts,
        "effectiveConfig": config.effective_json(),
    });
    let path = resolved.output_dir.join("scenario_obstacle.json");
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Failure::run(format!("{}: {e}", parent.display())))?;
        }
    }
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Failure::run(format!("{}: {e}", path.display())))?;

    println!(
        "obstacle under foot {} ({height} m): settled in {settle_duration:.2} s",
        foot
    );
    for f in Foot::ALL {
        println!(
            "  foot {}: clearance {:+.4} m, {}",
            f,
            clearances[f.index()],
            if contacts[f.index()] { "bearing" } else { "in the air" }
        );
    }
    println!("summary: {}", path.display());
    Ok(())
}
