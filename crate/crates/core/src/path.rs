//! Trajectories through a list of waypoints.
//!
//! Consecutive waypoints are joined by synchronized straight-line motions
//! (legs). Around each intermediate waypoint the end of one leg's cruise is
//! connected to the start of the next leg's cruise by a transition whose
//! per-axis durations are made equal. The path therefore rounds the corner
//! instead of stopping on it.
//!
//! A leg too short to reach `vmax` has no cruise; its transitions are then
//! anchored at its peak-velocity instant, where the acceleration is zero too.

use crate::adjust::{impose_common_time, TransitionProblem, DEFAULT_RESOLUTION};
use crate::error::{PlanError, Result};
use crate::profile::{AxisProfile, KinematicLimits, KinematicState};
use crate::sync::{plan_synchronized, SyncedMotion};

/// Per-axis data of one transition, as used to pick its duration.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionReport {
    pub v_initial: Vec<f64>,
    pub v_final: Vec<f64>,
    pub displacement: Vec<f64>,
    pub t_opt: Vec<f64>,
    pub t_imp: f64,
}

/// A complete waypoint trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct WaypointPath {
    pub axes: Vec<AxisProfile>,
    pub transitions: Vec<TransitionReport>,
}

impl WaypointPath {
    pub fn duration(&self) -> f64 {
        self.axes.first().map_or(0.0, AxisProfile::duration)
    }
}

/// Zero-acceleration state of every axis at leg time `t`.
fn anchor(leg: &SyncedMotion, t: f64) -> Vec<KinematicState> {
    leg.axes
        .iter()
        .map(|p| {
            let s = p.evaluate_clamped(p.t0() + t).0;
            KinematicState::new(0.0, s.v, s.x)
        })
        .collect()
}

/// Transition problems between the end of `leg_in`'s cruise and the start of
/// `leg_out`'s cruise, one per axis.
pub fn transition_conditions(
    leg_in: &SyncedMotion,
    leg_out: &SyncedMotion,
    limits: &[KinematicLimits],
) -> Result<Vec<TransitionProblem>> {
    Ok(conditions(leg_in, leg_out, limits)?.0)
}

/// Problems plus the absolute start positions they are relative to.
fn conditions(
    leg_in: &SyncedMotion,
    leg_out: &SyncedMotion,
    limits: &[KinematicLimits],
) -> Result<(Vec<TransitionProblem>, Vec<f64>)> {
    if leg_in.axes.len() != limits.len() || leg_out.axes.len() != limits.len() {
        return Err(PlanError::DimensionMismatch(format!(
            "legs with {} and {} axes, {} limit sets",
            leg_in.axes.len(),
            leg_out.axes.len(),
            limits.len()
        )));
    }
    let ic = anchor(leg_in, leg_in.timing.cruise_end());
    let fc = anchor(leg_out, leg_out.timing.cruise_start());
    let problems = ic
        .iter()
        .zip(&fc)
        .zip(limits)
        .map(|((i, f), l)| TransitionProblem::new(i.v, f.v, f.x - i.x, l))
        .collect::<Result<Vec<_>>>()?;
    Ok((problems, ic.iter().map(|s| s.x).collect()))
}

/// Trajectory through `points` (at least three), starting and ending at rest.
/// `limits` holds one set per coordinate.
pub fn plan_waypoint_path(points: &[Vec<f64>], limits: &[KinematicLimits]) -> Result<WaypointPath> {
    if points.len() < 3 {
        return Err(PlanError::TooFewPoints(points.len()));
    }
    let legs = points
        .windows(2)
        .map(|w| plan_synchronized(&w[0], &w[1], limits))
        .collect::<Result<Vec<_>>>()?;

    let mut axes: Vec<AxisProfile> = points[0]
        .iter()
        .map(|&x| AxisProfile::new(0.0, KinematicState::rest(x)))
        .collect();
    let mut transitions = Vec::with_capacity(legs.len() - 1);
    let mut leg_start = 0.0;

    for (k, pair) in legs.windows(2).enumerate() {
        let (leg_in, leg_out) = (&pair[0], &pair[1]);
        append_leg(&mut axes, leg_in, leg_start, leg_in.timing.cruise_end())?;

        let (problems, offsets) = conditions(leg_in, leg_out, limits)?;
        let (t_imp, profiles) = impose_common_time(&problems, limits, DEFAULT_RESOLUTION)?;
        for ((axis, piece), x0) in axes.iter_mut().zip(&profiles).zip(&offsets) {
            extend(axis, &piece.scaled(1.0, *x0))?;
        }
        transitions.push(TransitionReport {
            v_initial: problems.iter().map(|p| p.init.v).collect(),
            v_final: problems.iter().map(|p| p.final_state.v).collect(),
            displacement: problems.iter().map(|p| p.displacement).collect(),
            t_opt: problems.iter().map(|p| p.t_opt).collect(),
            t_imp,
        });
        if k + 1 == legs.len() - 1 {
            let last = leg_out;
            append_leg(&mut axes, last, last.timing.cruise_start(), last.duration())?;
        }
        leg_start = leg_out.timing.cruise_start();
    }
    Ok(WaypointPath { axes, transitions })
}

/// Appends the part `[from, to]` (leg-relative times) of every axis of `leg`.
fn append_leg(axes: &mut [AxisProfile], leg: &SyncedMotion, from: f64, to: f64) -> Result<()> {
    for (axis, part) in axes.iter_mut().zip(&leg.axes) {
        if to > from {
            extend(axis, &part.slice(part.t0() + from, part.t0() + to))?;
        }
    }
    Ok(())
}

fn extend(axis: &mut AxisProfile, piece: &AxisProfile) -> Result<()> {
    if piece.is_empty() {
        return Ok(());
    }
    axis.extend_with(piece)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::check_limits;
    use approx::assert_abs_diff_eq;

    const L: KinematicLimits = KinematicLimits::LINEAR;

    fn corner() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0, 0.0], vec![0.15, 0.15, 0.0], vec![0.3, 0.3, 0.15]]
    }

    fn seams_are_smooth(p: &AxisProfile) {
        for w in p.segments().windows(2) {
            assert!(w[0].end().approx_eq(&w[1].start, 1e-9));
        }
    }

    #[test]
    fn corner_transition_table() {
        let path = plan_waypoint_path(&corner(), &[L; 3]).unwrap();
        let t = &path.transitions[0];
        for (got, want) in t.v_initial.iter().zip([0.15, 0.15, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        for (got, want) in t.v_final.iter().zip([0.15, 0.15, 0.15]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        for (got, want) in t.displacement.iter().zip([0.125, 0.125, 0.0625]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        for got in &t.t_opt {
            assert_abs_diff_eq!(*got, 5.0 / 6.0, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(t.t_imp, 5.0 / 6.0, epsilon = 1e-6);
    }

    #[test]
    fn corner_trajectory_is_smooth_and_bounded() {
        let pts = corner();
        let path = plan_waypoint_path(&pts, &[L; 3]).unwrap();
        let t = path.duration();
        for (i, p) in path.axes.iter().enumerate() {
            assert_abs_diff_eq!(p.duration(), t, epsilon = 1e-6);
            seams_are_smooth(p);
            assert!(check_limits(p, &L, 1e-9).is_empty());
            let (s, e) = (p.start_state(), p.end_state());
            assert!(s.approx_eq(&KinematicState::rest(pts[0][i]), 1e-12));
            assert!(e.approx_eq(&KinematicState::rest(pts[2][i]), 1e-9));
        }
    }

    #[test]
    fn collinear_points_cruise_through() {
        let pts = vec![vec![0.0], vec![0.3], vec![0.6]];
        let path = plan_waypoint_path(&pts, &[L]).unwrap();
        let t = &path.transitions[0];
        assert_abs_diff_eq!(t.t_imp, t.t_opt[0], epsilon = 1e-9);
        assert_abs_diff_eq!(t.displacement[0], 0.15 * t.t_opt[0], epsilon = 1e-9);
        let p = &path.axes[0];
        let (mid, _) = p.evaluate(p.duration() / 2.0).unwrap();
        assert_abs_diff_eq!(mid.v, 0.15, epsilon = 1e-12);
        assert_abs_diff_eq!(p.end_state().x, 0.6, epsilon = 1e-9);
    }

    #[test]
    fn short_legs_anchor_at_peak_velocity() {
        let pts = vec![vec![0.0, 0.0], vec![0.05, 0.02], vec![0.04, 0.09], vec![0.1, 0.1]];
        let path = plan_waypoint_path(&pts, &[L; 2]).unwrap();
        assert_eq!(path.transitions.len(), 2);
        for (i, p) in path.axes.iter().enumerate() {
            seams_are_smooth(p);
            assert!(check_limits(p, &L, 1e-9).is_empty());
            assert_abs_diff_eq!(p.end_state().x, pts[3][i], epsilon = 1e-9);
            assert_abs_diff_eq!(p.end_state().v, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn repeated_waypoint_dwells() {
        let pts = vec![vec![0.0], vec![0.1], vec![0.1], vec![0.0]];
        let path = plan_waypoint_path(&pts, &[L]).unwrap();
        let p = &path.axes[0];
        seams_are_smooth(p);
        assert_abs_diff_eq!(p.end_state().x, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn identical_points_do_not_move() {
        let path = plan_waypoint_path(&vec![vec![1.0, 2.0]; 3], &[L; 2]).unwrap();
        for (p, x) in path.axes.iter().zip([1.0, 2.0]) {
            assert_eq!(p.end_state(), KinematicState::rest(x));
            assert!(p.segments().iter().all(|s| s.jerk == 0.0 && s.start.v == 0.0));
        }
    }

    #[test]
    fn needs_three_points() {
        assert_eq!(
            plan_waypoint_path(&[vec![0.0], vec![1.0]], &[L]),
            Err(PlanError::TooFewPoints(2))
        );
    }
}
