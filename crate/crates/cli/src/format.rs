//! Text formats: numbers, limits files, waypoint files, reference streams and
//! trajectory CSV.

use std::io::{self, Write};

use softmotion::{AxisProfile, KinematicLimits};

use crate::error::CliError;

/// Significant digits written for every number.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// `x` with [`SIGNIFICANT_DIGITS`] significant digits, trailing zeros
/// removed, in fixed notation for moderate exponents and scientific
/// otherwise (like C's `%.9g`).
pub fn number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    let fixed = trim_zeros(&fixed);
    if fixed == "-0" {
        "0".into()
    } else {
        fixed.into()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Comma-separated list of numbers.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("'{p}' is not a number in '{text}'")))
        })
        .collect()
}

/// Linear and angular limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSet {
    pub linear: KinematicLimits,
    pub angular: KinematicLimits,
}

impl Default for LimitSet {
    fn default() -> Self {
        Self {
            linear: KinematicLimits::LINEAR,
            angular: KinematicLimits::ANGULAR,
        }
    }
}

/// Parses `key = value` lines (`#` starts a comment). Keys are
/// `linear.jmax`, `linear.amax`, `linear.vmax` and the same for `angular`;
/// missing keys keep their defaults.
pub fn parse_limits(text: &str) -> Result<LimitSet, CliError> {
    let d = LimitSet::default();
    let mut v = [
        d.linear.jmax(),
        d.linear.amax(),
        d.linear.vmax(),
        d.angular.jmax(),
        d.angular.amax(),
        d.angular.vmax(),
    ];
    for (no, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let bad = || CliError::Input(format!("limits line {}: '{line}'", no + 1));
        let (key, value) = line.split_once('=').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        let slot = match key.trim() {
            "linear.jmax" => 0,
            "linear.amax" => 1,
            "linear.vmax" => 2,
            "angular.jmax" => 3,
            "angular.amax" => 4,
            "angular.vmax" => 5,
            other => return Err(CliError::Input(format!("unknown limits key '{other}'"))),
        };
        v[slot] = value;
    }
    Ok(LimitSet {
        linear: KinematicLimits::new(v[0], v[1], v[2])?,
        angular: KinematicLimits::new(v[3], v[4], v[5])?,
    })
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// One waypoint per line, `x,y,z` or `x,y,z,qn,qi,qj,qk`; every line must
/// have the same length.
pub fn parse_waypoints(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for line in text.lines() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let p = parse_vector(line)?;
        check_pose_length(&p)?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(CliError::Input(format!(
                    "waypoint '{line}' has {} coordinates, expected {}",
                    p.len(),
                    first.len()
                )));
            }
        }
        points.push(p);
    }
    Ok(points)
}

pub fn check_pose_length(p: &[f64]) -> Result<(), CliError> {
    if p.len() == 3 || p.len() == 7 {
        Ok(())
    } else {
        Err(CliError::Input(format!("expected 3 or 7 coordinates, got {}", p.len())))
    }
}

/// A line `t vx vy vz wx wy wz` of a reference stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub t: f64,
    pub v: [f64; 3],
    pub w: [f64; 3],
}

pub fn parse_reference(line: &str) -> Result<Reference, CliError> {
    let fields: Vec<f64> = line
        .split_whitespace()
        .map(|f| f.parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Input(format!("malformed reference '{line}'")))?;
    if fields.len() != 7 {
        return Err(CliError::Input(format!(
            "reference '{line}' has {} fields, expected 7",
            fields.len()
        )));
    }
    Ok(Reference {
        t: fields[0],
        v: [fields[1], fields[2], fields[3]],
        w: [fields[4], fields[5], fields[6]],
    })
}

/// Axis names for three or seven coordinates.
pub fn axis_names(n: usize) -> Vec<String> {
    let names = ["x", "y", "z", "qn", "qi", "qj", "qk"];
    if n == 3 || n == 7 {
        names[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (0..n).map(|i| format!("a{i}")).collect()
    }
}

/// Trajectory CSV: header `t,<axis>_pos,<axis>_vel,<axis>_acc,<axis>_jerk,...`
/// then one row per sampling time. With seven axes the sampled quaternion
/// positions are renormalized.
pub fn write_trajectory(out: &mut (impl Write + ?Sized), axes: &[AxisProfile], dt: f64) -> io::Result<()> {
    let names = axis_names(axes.len());
    let mut header = vec!["t".to_string()];
    for n in &names {
        for q in ["pos", "vel", "acc", "jerk"] {
            header.push(format!("{n}_{q}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    let Some(first) = axes.first() else {
        return Ok(());
    };
    for t in first.sample_times(dt) {
        let samples: Vec<_> = axes.iter().map(|p| p.evaluate_clamped(t)).collect();
        let mut pos: Vec<f64> = samples.iter().map(|(s, _)| s.x).collect();
        if pos.len() == 7 {
            let r = pos[3..].iter().map(|c| c * c).sum::<f64>().sqrt();
            pos[3..].iter_mut().for_each(|c| *c /= r);
        }
        let mut row = vec![number(t)];
        for ((s, jerk), x) in samples.iter().zip(&pos) {
            row.extend([number(*x), number(s.v), number(s.a), number(*jerk)]);
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
