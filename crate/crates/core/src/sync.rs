//! Straight-line point-to-point motion of several axes at once.
//!
//! Every axis follows `x_i(t) = p0_i + Δ_i·φ(t)` where `φ` is a rest-to-rest
//! progress profile from 0 to 1. Planning `φ` under the tightest per-unit
//! limits `min_i(J_i/|Δ_i|)`, `min_i(A_i/|Δ_i|)`, `min_i(V_i/|Δ_i|)` keeps
//! every axis inside its own limits, makes all axes end together, and keeps
//! the motion on the segment from `p0` to `pf`. With shared limits the axis
//! with the largest displacement runs exactly at its limits.

use crate::error::{PlanError, Result};
use crate::profile::{AxisProfile, KinematicLimits, KinematicState};
use crate::ptp::{profile_from_timing, ptp_timing, PtpTiming};

/// Synchronized straight-line motion with its shared timing.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncedMotion {
    pub axes: Vec<AxisProfile>,
    /// Segment durations of the common progress profile.
    pub timing: PtpTiming,
}

impl SyncedMotion {
    pub fn duration(&self) -> f64 {
        self.timing.total()
    }
}

/// Synchronized motion from `p0` to `pf` with one set of limits per axis.
///
/// Axes that do not move hold their position for the whole motion.
pub fn plan_synchronized(p0: &[f64], pf: &[f64], limits: &[KinematicLimits]) -> Result<SyncedMotion> {
    if p0.len() != pf.len() || p0.len() != limits.len() {
        return Err(PlanError::DimensionMismatch(format!(
            "{} start coordinates, {} end coordinates, {} limit sets",
            p0.len(),
            pf.len(),
            limits.len()
        )));
    }
    if p0.is_empty() {
        return Err(PlanError::DimensionMismatch("no axes".into()));
    }
    if p0.iter().chain(pf).any(|x| !x.is_finite()) {
        return Err(PlanError::NonFinite("waypoint coordinate"));
    }

    let (mut j, mut a, mut v) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for ((x0, xf), l) in p0.iter().zip(pf).zip(limits) {
        let d = (xf - x0).abs();
        if d > 0.0 {
            j = j.min(l.jmax() / d);
            a = a.min(l.amax() / d);
            v = v.min(l.vmax() / d);
        }
    }
    if !j.is_finite() {
        let axes = p0
            .iter()
            .map(|&x| AxisProfile::new(0.0, KinematicState::rest(x)))
            .collect();
        return Ok(SyncedMotion {
            axes,
            timing: PtpTiming::ZERO,
        });
    }

    let unit = KinematicLimits::new(j, a, v)?;
    let timing = ptp_timing(1.0, &unit);
    let progress = profile_from_timing(&timing, unit.jmax());
    let total = timing.total();
    let axes = p0
        .iter()
        .zip(pf)
        .map(|(&x0, &xf)| {
            if xf == x0 {
                AxisProfile::dwell(0.0, KinematicState::rest(x0), total)
            } else {
                progress.scaled(xf - x0, x0)
            }
        })
        .collect();
    Ok(SyncedMotion { axes, timing })
}

/// Synchronized straight-line motion with limits shared by every axis.
pub fn plan_ptp_nd(p0: &[f64], pf: &[f64], limits: &KinematicLimits) -> Result<Vec<AxisProfile>> {
    Ok(plan_synchronized(p0, pf, &vec![*limits; p0.len()])?.axes)
}

/// Limits under which the minimal-time motion of any displacement lasts
/// `t_imp / t_opt` times longer: `(jmax/s³, amax/s², vmax/s)` with
/// `s = t_imp / t_opt`.
pub fn scale_limits_for_duration(limits: &KinematicLimits, t_opt: f64, t_imp: f64) -> Result<KinematicLimits> {
    if !(t_opt > 0.0 && t_opt.is_finite() && t_imp.is_finite()) {
        return Err(PlanError::NonFinite("durations"));
    }
    if t_imp < t_opt {
        return Err(PlanError::DurationTooShort { t_imp, t_opt });
    }
    let s = t_imp / t_opt;
    KinematicLimits::new(limits.jmax() / (s * s * s), limits.amax() / (s * s), limits.vmax() / s)
}
