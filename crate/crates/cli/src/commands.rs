use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use softmotion::oracle::brute_force_min_time;
use softmotion::orientation::{plan_pose_axes, pose_limits, same_hemisphere, Pose, Quaternion, Twist};
use softmotion::path::{plan_waypoint_path, WaypointPath};
use softmotion::sync::plan_synchronized;
use softmotion::tracker::Tracker;
use softmotion::{KinematicLimits, KinematicState};

use crate::error::CliError;
use crate::format::{
    axis_names, check_pose_length, number, parse_limits, parse_reference, parse_vector, parse_waypoints,
    write_trajectory, LimitSet,
};

#[derive(Debug, Parser)]
#[command(name = "softmotion", version, about = "Jerk-limited trajectory planning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Straight-line motion between two positions or poses, sampled to CSV.
    PlanPtp(PlanPtp),
    /// Smooth motion through a list of waypoints, sampled to CSV.
    PlanPath(PlanPath),
    /// Follow velocity references read from standard input.
    Track(Track),
    /// Brute-force minimal time of a one-axis transition.
    Oracle(Oracle),
}

#[derive(Debug, Args)]
pub struct LimitsArg {
    /// Limits file (`linear.jmax = ...`); defaults apply when omitted.
    #[arg(long)]
    pub limits: Option<PathBuf>,
}

impl LimitsArg {
    fn load(&self) -> Result<LimitSet, CliError> {
        match &self.limits {
            Some(p) => parse_limits(&read(p)?),
            None => Ok(LimitSet::default()),
        }
    }
}

#[derive(Debug, Args)]
pub struct PlanPtp {
    /// Start as `x,y,z` or `x,y,z,qn,qi,qj,qk`.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    /// Goal, same form as `--from`.
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[command(flatten)]
    pub limits: LimitsArg,
    /// Sampling period in seconds.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanPath {
    /// Waypoint file, one `x,y,z[,qn,qi,qj,qk]` per line.
    #[arg(long)]
    pub waypoints: PathBuf,
    #[command(flatten)]
    pub limits: LimitsArg,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-transition table (initial and final velocities, displacement,
    /// minimal and imposed times).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Track {
    #[command(flatten)]
    pub limits: LimitsArg,
    /// Tick period in seconds.
    #[arg(long, default_value_t = 0.01)]
    pub tick: f64,
    /// Initial pose, `x,y,z` or `x,y,z,qn,qi,qj,qk`.
    #[arg(long, default_value = "0,0,0,1,0,0,0", allow_hyphen_values = true)]
    pub start: String,
}

#[derive(Debug, Args)]
pub struct Oracle {
    /// Initial `a,v`.
    #[arg(long, allow_hyphen_values = true)]
    pub init: String,
    /// Final `a,v`.
    #[arg(long, allow_hyphen_values = true)]
    pub r#final: String,
    #[arg(long, allow_hyphen_values = true)]
    pub displacement: f64,
    #[command(flatten)]
    pub limits: LimitsArg,
    /// Use the angular limits instead of the linear ones.
    #[arg(long)]
    pub angular: bool,
    /// Search step in seconds.
    #[arg(long, default_value_t = 0.002)]
    pub dt: f64,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn create(path: &Path) -> Result<fs::File, CliError> {
    fs::File::create(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn check_period(dt: f64, what: &str) -> Result<(), CliError> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("{what} must be positive, got {dt}")))
    }
}

/// Writes to the file if given, else to `stdout`.
fn emit(
    path: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = std::io::BufWriter::new(create(p)?);
            body(&mut f)?;
            f.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn pose_of(c: &[f64]) -> Pose {
    Pose::new([c[0], c[1], c[2]], Quaternion::new(c[3], c[4], c[5], c[6]))
}

pub fn plan_ptp(args: &PlanPtp, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_period(args.dt, "--dt")?;
    let limits = args.limits.load()?;
    let (p0, pf) = (parse_vector(&args.from)?, parse_vector(&args.to)?);
    check_pose_length(&p0)?;
    if p0.len() != pf.len() {
        return Err(CliError::Input("--from and --to differ in length".into()));
    }
    let axes = if p0.len() == 7 {
        plan_pose_axes(&pose_of(&p0), &pose_of(&pf), &limits.linear, &limits.angular)?
    } else {
        plan_synchronized(&p0, &pf, &[limits.linear; 3])?.axes
    };
    emit(&args.out, stdout, |w| write_trajectory(w, &axes, args.dt))
}

/// Waypoints with every quaternion brought into the hemisphere of its
/// predecessor, and the per-coordinate limits.
fn prepare_waypoints(
    mut points: Vec<Vec<f64>>,
    limits: &LimitSet,
) -> Result<(Vec<Vec<f64>>, Vec<KinematicLimits>), CliError> {
    if points.first().map_or(3, Vec::len) == 3 {
        return Ok((points, vec![limits.linear; 3]));
    }
    for k in 0..points.len() {
        let q = pose_of(&points[k]).orient;
        q.ensure_unit()?;
        if k > 0 {
            let prev = pose_of(&points[k - 1]).orient;
            points[k][3..].copy_from_slice(&same_hemisphere(&prev, &q).to_array());
        }
    }
    Ok((points, pose_limits(&limits.linear, &limits.angular)?.to_vec()))
}

pub fn plan_path(args: &PlanPath, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_period(args.dt, "--dt")?;
    let limits = args.limits.load()?;
    let points = parse_waypoints(&read(&args.waypoints)?)?;
    let (points, per_axis) = prepare_waypoints(points, &limits)?;
    let path = plan_waypoint_path(&points, &per_axis)?;
    if let Some(report) = &args.report {
        let mut f = std::io::BufWriter::new(create(report)?);
        write_report(&mut f, &path)?;
        f.flush()?;
    }
    emit(&args.out, stdout, |w| write_trajectory(w, &path.axes, args.dt))
}

/// One row per transition and axis.
pub fn write_report(out: &mut impl Write, path: &WaypointPath) -> std::io::Result<()> {
    writeln!(out, "transition,axis,v_ic,v_fc,displacement,t_opt,t_imp")?;
    let names = axis_names(path.axes.len());
    for (k, t) in path.transitions.iter().enumerate() {
        for (i, name) in names.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                k + 1,
                name,
                number(t.v_initial[i]),
                number(t.v_final[i]),
                number(t.displacement[i]),
                number(t.t_opt[i]),
                number(t.t_imp)
            )?;
        }
    }
    Ok(())
}

/// Reads references, ticks the tracker up to each reference's timestamp with
/// the previously latched reference, and prints one state line per tick.
/// Malformed or out-of-order lines are skipped with a warning.
pub fn track(
    args: &Track,
    input: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    check_period(args.tick, "--tick")?;
    let limits = args.limits.load()?;
    let mut start = parse_vector(&args.start)?;
    check_pose_length(&start)?;
    if start.len() == 3 {
        start.extend(Quaternion::IDENTITY.to_array());
    }
    let mut tracker = Tracker::at_pose(&pose_of(&start), &limits.linear, &limits.angular, args.tick)?;

    let names = axis_names(7);
    let mut header = vec!["# t".to_string()];
    for n in &names {
        header.extend([format!("{n}_pos"), format!("{n}_vel"), format!("{n}_acc")]);
    }
    let mut wrote_header = false;
    let mut latched = Twist::default();
    let mut last_t = f64::NEG_INFINITY;
    let mut ticks: u64 = 0;

    for (no, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let reference = match parse_reference(text) {
            Ok(r) if r.t >= last_t => r,
            Ok(r) => {
                writeln!(stderr, "warning: line {}: time {} goes backwards, skipped", no + 1, r.t)?;
                continue;
            }
            Err(e) => {
                writeln!(stderr, "warning: line {}: {e}, skipped", no + 1)?;
                continue;
            }
        };
        last_t = reference.t;
        if !wrote_header {
            writeln!(stdout, "{}", header.join(" "))?;
            wrote_header = true;
        }
        while (ticks as f64) * args.tick < reference.t - 1e-9 {
            tracker.step_twist(&latched)?;
            ticks += 1;
            write_states(stdout, ticks as f64 * args.tick, tracker.states())?;
        }
        latched = Twist {
            v: reference.v,
            w: reference.w,
        };
    }
    Ok(())
}

fn write_states(out: &mut dyn Write, t: f64, states: &[KinematicState]) -> std::io::Result<()> {
    let mut row = vec![number(t)];
    for s in states {
        row.extend([number(s.x), number(s.v), number(s.a)]);
    }
    writeln!(out, "{}", row.join(" "))
}

fn phase(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    match parse_vector(text)?[..] {
        [a, v] => Ok((a, v)),
        _ => Err(CliError::Input(format!("{what} must be 'a,v'"))),
    }
}

pub fn oracle(args: &Oracle, stdout: &mut dyn Write) -> Result<(), CliError> {
    check_period(args.dt, "--dt")?;
    let set = args.limits.load()?;
    let limits = if args.angular { set.angular } else { set.linear };
    let (a0, v0) = phase(&args.init, "--init")?;
    let (af, vf) = phase(&args.r#final, "--final")?;
    if !args.displacement.is_finite() {
        return Err(CliError::Input("--displacement must be finite".into()));
    }
    let t = brute_force_min_time(
        &KinematicState::new(a0, v0, 0.0),
        &KinematicState::new(af, vf, args.displacement),
        &limits,
        args.dt,
    )?;
    writeln!(stdout, "{}", number(t))?;
    Ok(())
}

/// Runs a parsed command line against the given streams.
pub fn run(
    cli: &Cli,
    input: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match &cli.command {
        Command::PlanPtp(a) => plan_ptp(a, stdout),
        Command::PlanPath(a) => plan_path(a, stdout),
        Command::Track(a) => track(a, input, stdout, stderr),
        Command::Oracle(a) => oracle(a, stdout),
    }
}

