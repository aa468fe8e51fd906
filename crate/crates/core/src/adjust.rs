//! Stretching a transition to an imposed duration.
//!
//! A transition between two cruise states can be lengthened in two ways: by
//! lowering its cruise velocity (a *slowing velocity* motion), or by stopping,
//! waiting and restarting. The first only works on some sub-intervals of
//! `[t_opt, t_stop]`; the second works for every duration from `t_stop` on.

use crate::error::{PlanError, Result};
use crate::general::{plan_min_time_1d, velocity_change, PhaseState};
use crate::profile::{advance, AxisProfile, KinematicLimits, KinematicState};
use crate::ptp::plan_ptp_1d;

/// Durations closer than this are considered equal.
pub const DURATION_TOLERANCE: f64 = 1e-6;

/// Default scan step of [`feasibility_intervals`].
pub const DEFAULT_RESOLUTION: f64 = 1e-3;

/// Number of cruise velocities sampled per unit of `vmax` when searching for
/// a slowing velocity.
const VELOCITY_SAMPLES: usize = 2000;

/// One axis of a transition between two zero-acceleration states.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionProblem {
    pub init: KinematicState,
    pub final_state: KinematicState,
    pub displacement: f64,
    pub t_opt: f64,
    pub t_stop: f64,
    pub t_imp: Option<f64>,
}

impl TransitionProblem {
    /// Transition from velocity `v0` to `vf` over `displacement`, with
    /// `t_opt` and `t_stop` filled in.
    pub fn new(v0: f64, vf: f64, displacement: f64, limits: &KinematicLimits) -> Result<Self> {
        if !(v0.is_finite() && vf.is_finite() && displacement.is_finite()) {
            return Err(PlanError::NonFinite("transition boundary"));
        }
        let init = KinematicState::new(0.0, v0, 0.0);
        let final_state = KinematicState::new(0.0, vf, displacement);
        let t_opt = plan_min_time_1d(&init, &final_state, limits)?.duration();
        let mut problem = Self {
            init,
            final_state,
            displacement,
            t_opt,
            t_stop: 0.0,
            t_imp: None,
        };
        problem.t_stop = stop_time(&problem, limits)?.0.max(t_opt);
        Ok(problem)
    }

    pub fn with_t_imp(mut self, t_imp: f64) -> Self {
        self.t_imp = Some(t_imp);
        self
    }
}

/// Stop at zero velocity, cover the remaining distance rest to rest, and
/// restart. When the problem carries a `t_imp` above the stop-and-restart
/// time, the difference is spent at rest right after stopping.
pub fn stop_time(problem: &TransitionProblem, limits: &KinematicLimits) -> Result<(f64, AxisProfile)> {
    let rest = PhaseState::default();
    let init = problem.init;
    let mut profile = AxisProfile::from_pieces(
        0.0,
        init,
        &velocity_change(init.into(), rest, limits),
    );
    let stopped = profile.end_state();
    let restart = AxisProfile::from_pieces(
        0.0,
        KinematicState::default(),
        &velocity_change(rest, problem.final_state.into(), limits),
    );
    let mut residual = problem.final_state.x - stopped.x - restart.end_state().x;
    if residual.abs() <= 1e-12 * (1.0 + problem.displacement.abs()) {
        residual = 0.0;
    }
    let bare = profile.duration() + plan_ptp_1d(residual, limits).duration() + restart.duration();
    if let Some(t_imp) = problem.t_imp {
        if t_imp > bare {
            profile.push(0.0, t_imp - bare);
        }
    }
    let middle = plan_ptp_1d(residual, limits);
    for seg in middle.segments() {
        profile.push(seg.jerk, seg.duration);
    }
    for seg in restart.segments() {
        profile.push(seg.jerk, seg.duration);
    }
    Ok((bare, profile))
}

/// Phase-plane pieces and swept distance of the slowing motion through
/// cruise velocity `vc`.
struct Slowing {
    up: Vec<(f64, f64)>,
    down: Vec<(f64, f64)>,
    cruise: f64,
    residual: f64,
}

fn slowing(problem: &TransitionProblem, vc: f64, t_imp: f64, limits: &KinematicLimits) -> Slowing {
    let cruise_state = PhaseState::new(0.0, vc);
    let up = velocity_change(problem.init.into(), cruise_state, limits);
    let down = velocity_change(cruise_state, problem.final_state.into(), limits);
    let sweep = |start: KinematicState, pieces: &[(f64, f64)]| {
        let end = pieces.iter().fold(start, |s, &(j, t)| advance(&s, j, t));
        (pieces.iter().map(|p| p.1).sum::<f64>(), end.x - start.x)
    };
    let (t_up, d_up) = sweep(problem.init, &up);
    let (t_down, d_down) = sweep(cruise_state.at(0.0), &down);
    let cruise = t_imp - t_up - t_down;
    Slowing {
        up,
        down,
        cruise,
        residual: d_up + d_down + vc * cruise - problem.displacement,
    }
}

/// Profile of duration `t_imp` whose cruise runs below `vmax`.
///
/// Fails with [`PlanError::InfeasibleDuration`] when `t_imp` falls in a gap
/// where no such motion exists.
pub fn plan_slowing_velocity(
    problem: &TransitionProblem,
    t_imp: f64,
    limits: &KinematicLimits,
) -> Result<AxisProfile> {
    if !t_imp.is_finite() {
        return Err(PlanError::NonFinite("imposed duration"));
    }
    if t_imp < problem.t_opt - DURATION_TOLERANCE {
        return Err(PlanError::DurationTooShort {
            t_imp,
            t_opt: problem.t_opt,
        });
    }
    if t_imp <= problem.t_opt + 1e-9 {
        return plan_min_time_1d(&problem.init, &problem.final_state, limits);
    }
    let vc = slowing_velocity(problem, t_imp, limits)
        .ok_or(PlanError::InfeasibleDuration { t_imp })?;
    let s = slowing(problem, vc, t_imp, limits);
    let mut pieces = s.up;
    pieces.push((0.0, s.cruise.max(0.0)));
    pieces.extend(s.down);
    let profile = AxisProfile::from_pieces(0.0, problem.init, &pieces);
    let end = profile.end_state();
    if end.max_abs_diff(&problem.final_state) > 1e-9
        || (profile.duration() - t_imp).abs() > DURATION_TOLERANCE
    {
        return Err(PlanError::InfeasibleDuration { t_imp });
    }
    Ok(profile)
}

/// Cruise velocity solving the slowing equations, preferring the fastest one
/// in the direction of travel.
fn slowing_velocity(problem: &TransitionProblem, t_imp: f64, limits: &KinematicLimits) -> Option<f64> {
    let vmax = limits.vmax();
    let k = limits.amax() * limits.amax() / limits.jmax();
    let (v0, vf) = (problem.init.v, problem.final_state.v);
    let mut grid: Vec<f64> = (0..=VELOCITY_SAMPLES)
        .map(|i| -vmax + 2.0 * vmax * i as f64 / VELOCITY_SAMPLES as f64)
        .collect();
    // the shape of each velocity change switches at these cruise velocities
    grid.extend(
        [v0, vf, v0 + k, v0 - k, vf + k, vf - k, 0.0]
            .into_iter()
            .filter(|v| v.abs() <= vmax),
    );
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let eval = |vc: f64| {
        let s = slowing(problem, vc, t_imp, limits);
        (s.cruise >= -1e-12).then_some(s.residual)
    };
    let direction = if problem.displacement >= 0.0 { 1.0 } else { -1.0 };
    let mut best: Option<f64> = None;
    let mut keep = |vc: f64| {
        if best.is_none_or(|b| vc * direction > b * direction) {
            best = Some(vc);
        }
    };
    let mut prev: Option<(f64, f64)> = None;
    for &vc in &grid {
        let Some(r) = eval(vc) else {
            prev = None;
            continue;
        };
        if r == 0.0 {
            keep(vc);
        } else if let Some((pv, pr)) = prev {
            if pr != 0.0 && pr.signum() != r.signum() {
                if let Some(root) = bisect(&eval, pv, vc, pr) {
                    keep(root);
                }
            }
        }
        prev = Some((vc, r));
    }
    best
}

fn bisect(eval: &impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64, r_lo: f64) -> Option<f64> {
    let sign = r_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = eval(mid)?;
        if r == 0.0 {
            return Some(mid);
        }
        if r.signum() == sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rl, rh) = (eval(lo)?, eval(hi)?);
    Some(if rl.abs() <= rh.abs() { lo } else { hi })
}

/// Closed duration intervals for which the transition can be stretched. The
/// last interval always ends at infinity.
pub fn feasibility_intervals(
    problem: &TransitionProblem,
    limits: &KinematicLimits,
    resolution: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(PlanError::NegativeDuration(resolution));
    }
    let (t_opt, t_stop) = (problem.t_opt, problem.t_stop);
    let feasible = |t: f64| t >= t_stop || plan_slowing_velocity(problem, t, limits).is_ok();
    let mut intervals = Vec::new();
    let mut open: Option<f64> = Some(t_opt);
    let mut prev = t_opt;
    let steps = ((t_stop - t_opt) / resolution).ceil() as usize;
    for i in 1..=steps {
        let t = (t_opt + i as f64 * resolution).min(t_stop);
        let ok = feasible(t);
        match (open, ok) {
            (Some(lo), false) => {
                intervals.push((lo, refine(&feasible, prev, t)));
                open = None;
            }
            (None, true) => open = Some(refine(&feasible, t, prev)),
            _ => {}
        }
        prev = t;
    }
    let lo = open.unwrap_or(t_stop);
    intervals.push((lo, f64::INFINITY));
    Ok(intervals)
}

/// Bisects between a feasible and an infeasible duration and returns the
/// feasible end of the final bracket.
fn refine(feasible: &impl Fn(f64) -> bool, mut good: f64, mut bad: f64) -> f64 {
    while (good - bad).abs() > DURATION_TOLERANCE {
        let mid = 0.5 * (good + bad);
        if feasible(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Smallest duration feasible for every axis, and the stretched profiles.
pub fn impose_common_time(
    problems: &[TransitionProblem],
    limits: &[KinematicLimits],
    resolution: f64,
) -> Result<(f64, Vec<AxisProfile>)> {
    if problems.is_empty() {
        return Err(PlanError::DimensionMismatch("no axes".into()));
    }
    if problems.len() != limits.len() {
        return Err(PlanError::DimensionMismatch(format!(
            "{} problems, {} limits",
            problems.len(),
            limits.len()
        )));
    }
    let intervals = problems
        .iter()
        .zip(limits)
        .map(|(p, l)| feasibility_intervals(p, l, resolution))
        .collect::<Result<Vec<_>>>()?;
    let t_min = problems.iter().fold(0.0f64, |m, p| m.max(p.t_opt));
    let contains = |set: &[(f64, f64)], t: f64| set.iter().any(|&(lo, hi)| t >= lo && t <= hi);
    let mut candidates: Vec<f64> = intervals
        .iter()
        .flatten()
        .map(|&(lo, _)| lo)
        .filter(|&lo| lo >= t_min)
        .collect();
    candidates.push(t_min);
    candidates.sort_by(f64::total_cmp);
    let t_imp = candidates
        .into_iter()
        .find(|&t| intervals.iter().all(|set| contains(set, t)))
        .unwrap_or_else(|| problems.iter().fold(0.0f64, |m, p| m.max(p.t_stop)));

    let profiles = problems
        .iter()
        .zip(limits)
        .map(|(p, l)| stretch(p, t_imp, l))
        .collect::<Result<Vec<_>>>()?;
    Ok((t_imp, profiles))
}

/// Profile of exactly `t_imp` for one axis, by slowing down if possible and
/// by stopping and waiting otherwise.
pub fn stretch(problem: &TransitionProblem, t_imp: f64, limits: &KinematicLimits) -> Result<AxisProfile> {
    match plan_slowing_velocity(problem, t_imp, limits) {
        Ok(p) => Ok(p),
        Err(PlanError::InfeasibleDuration { .. }) if t_imp >= problem.t_stop - DURATION_TOLERANCE => {
            let with_dwell = problem.clone().with_t_imp(t_imp);
            Ok(stop_time(&with_dwell, limits)?.1)
        }
        Err(e) => Err(e),
    }
}
