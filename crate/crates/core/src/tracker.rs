//! Online tracking of a velocity reference.
//!
//! Every tick each axis is replanned from its current state to zero
//! acceleration at the reference velocity, over exactly the critical length:
//! the shortest motion that joins the reference without overshooting it. Any
//! other distance would have to come back and would oscillate. The state is
//! then advanced by one tick along the new plan.

use crate::error::{PlanError, Result};
use crate::general::{critical_length, plan_min_time_1d, PhaseState};
use crate::orientation::{omega_to_qdot, pose_limits, Pose, Quaternion, Twist};
use crate::profile::{advance, AxisProfile, KinematicLimits, KinematicState};

/// Default tick period in seconds.
pub const DEFAULT_TICK: f64 = 0.01;

/// One tick for every axis: the states after `dt` and the plans that were
/// followed. References beyond `vmax` are clamped.
pub fn tick(
    states: &[KinematicState],
    v_ref: &[f64],
    limits: &[KinematicLimits],
    dt: f64,
) -> Result<(Vec<KinematicState>, Vec<AxisProfile>)> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(PlanError::NegativeDuration(dt));
    }
    if states.len() != v_ref.len() || states.len() != limits.len() {
        return Err(PlanError::DimensionMismatch(format!(
            "{} states, {} references, {} limit sets",
            states.len(),
            v_ref.len(),
            limits.len()
        )));
    }
    let mut next = Vec::with_capacity(states.len());
    let mut plans = Vec::with_capacity(states.len());
    for ((s, &v), l) in states.iter().zip(v_ref).zip(limits) {
        let (state, plan) = tick_axis(s, v, l, dt)?;
        next.push(state);
        plans.push(plan);
    }
    Ok((next, plans))
}

fn tick_axis(
    state: &KinematicState,
    v_ref: f64,
    limits: &KinematicLimits,
    dt: f64,
) -> Result<(KinematicState, AxisProfile)> {
    if !v_ref.is_finite() {
        return Err(PlanError::NonFinite("velocity reference"));
    }
    let v_ref = v_ref.clamp(-limits.vmax(), limits.vmax());
    let target = PhaseState::new(0.0, v_ref);
    let dc = critical_length(PhaseState::from(*state), target, limits)?;
    let plan = plan_min_time_1d(state, &target.at(state.x + dc), limits)?;
    let next = if dt <= plan.duration() {
        plan.evaluate(dt)?.0
    } else {
        // reached the reference within the tick: coast
        let end = plan.end_state();
        let end = KinematicState::new(0.0, end.v, end.x);
        advance(&end, 0.0, dt - plan.duration())
    };
    Ok((next, plan))
}

/// Rates of the seven pose coordinates that realize `twist` from the
/// orientation held in `states[3..7]`.
pub fn twist_rates(states: &[KinematicState], twist: &Twist) -> Result<[f64; 7]> {
    if states.len() != 7 {
        return Err(PlanError::DimensionMismatch(format!("{} pose axes", states.len())));
    }
    let q = Quaternion::new(states[3].x, states[4].x, states[5].x, states[6].x).normalized();
    let d = omega_to_qdot(&q, twist.w)?;
    Ok([twist.v[0], twist.v[1], twist.v[2], d.n, d.i, d.j, d.k])
}

/// Tracker owning the state of its axes. One caller advances it at a time.
#[derive(Debug, Clone)]
pub struct Tracker {
    states: Vec<KinematicState>,
    limits: Vec<KinematicLimits>,
    dt: f64,
    time: f64,
}

impl Tracker {
    pub fn new(states: Vec<KinematicState>, limits: Vec<KinematicLimits>, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(PlanError::NegativeDuration(dt));
        }
        if states.len() != limits.len() {
            return Err(PlanError::DimensionMismatch(format!(
                "{} states, {} limit sets",
                states.len(),
                limits.len()
            )));
        }
        Ok(Self {
            states,
            limits,
            dt,
            time: 0.0,
        })
    }

    /// Tracker of a pose at rest, with per-coordinate pose limits.
    pub fn at_pose(pose: &Pose, linear: &KinematicLimits, angular: &KinematicLimits, dt: f64) -> Result<Self> {
        pose.orient.ensure_unit()?;
        let states = pose.coordinates().iter().map(|&x| KinematicState::rest(x)).collect();
        Self::new(states, pose_limits(linear, angular)?.to_vec(), dt)
    }

    pub fn states(&self) -> &[KinematicState] {
        &self.states
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances one tick toward the per-axis velocity references.
    pub fn step(&mut self, v_ref: &[f64]) -> Result<&[KinematicState]> {
        let (next, _) = tick(&self.states, v_ref, &self.limits, self.dt)?;
        self.states = next;
        self.time += self.dt;
        Ok(&self.states)
    }

    /// Advances one tick toward a twist; needs the seven pose axes.
    pub fn step_twist(&mut self, twist: &Twist) -> Result<&[KinematicState]> {
        let rates = twist_rates(&self.states, twist)?;
        self.step(&rates)
    }
}
