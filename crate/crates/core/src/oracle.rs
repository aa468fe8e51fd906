//! Brute-force minimal-time search used to validate the planners.
//!
//! Time is discretized in steps of `dt` and the jerk is chosen per step from
//! `{-jmax, 0, +jmax}`. Under such sequences the acceleration only moves by
//! whole multiples of `jmax·dt` and the velocity by whole multiples of
//! `jmax·dt²/2`, so after `k` steps every state sits on an integer lattice in
//! `(a, v)`. Each layer of the breadth-first search holds one cell per
//! reached lattice point together with the interval spanned by the positions
//! reaching it; cells are expanded in key order, so results are
//! deterministic.
//!
//! A cell is dropped when sound envelopes show that no continuation reaches
//! the goal ball before the current horizon. The horizon grows until a goal
//! cell appears; the first layer holding one gives the minimal time.
//!
//! The goal ball is `1e-3` in acceleration. In velocity it is `1e-3` capped
//! at two lattice spacings (`jmax·dt²`); in position it is `1e-3·max(1, |D|)`
//! capped at half a position step at full speed (`vmax·dt/2`) and at 1% of
//! the displacement (but no lower than `jmax·dt³`). Wider balls
//! let the search stop early near rest by much more than a step.

use crate::error::{PlanError, Result};
use crate::profile::{KinematicLimits, KinematicState};

/// Largest number of lattice cells a single layer may hold.
pub const NODE_CAP: usize = 5_000_000;

/// Goal tolerance on acceleration, and the uncapped velocity and per-metre
/// position tolerances.
const GOAL_TOL: f64 = 1e-3;

/// Hard stop on the horizon, in steps.
const MAX_STEPS: usize = 200_000;

/// Slack on limit comparisons.
const EPS: f64 = 1e-12;

/// Smallest multiple of `dt` at which a jerk sequence drives `init` into the
/// tolerance ball around `final_state`.
pub fn brute_force_min_time(
    init: &KinematicState,
    final_state: &KinematicState,
    limits: &KinematicLimits,
    dt: f64,
) -> Result<f64> {
    brute_force_with_cap(init, final_state, limits, dt, NODE_CAP)
}

/// As [`brute_force_min_time`] with an explicit per-layer cell budget.
pub fn brute_force_with_cap(
    init: &KinematicState,
    final_state: &KinematicState,
    limits: &KinematicLimits,
    dt: f64,
    cap: usize,
) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(PlanError::NegativeDuration(dt));
    }
    if !init.is_finite() || !final_state.is_finite() {
        return Err(PlanError::NonFinite("oracle boundary state"));
    }
    let search = Search::new(init, final_state, limits, dt);
    if search.in_goal(init.a, init.v, init.x, init.x) {
        return Ok(0.0);
    }
    if !search.admissible(init.a, init.v) || !search.admissible(final_state.a, -final_state.v) {
        return Err(PlanError::InfeasibleBoundary(format!(
            "oracle boundary {init} -> {final_state} outside the limits"
        )));
    }

    let mut horizon = 1usize;
    while !search.envelope(0, horizon).admits(init.v, init.x, init.x) {
        horizon += 1;
        if horizon > MAX_STEPS {
            return Err(PlanError::Unreachable);
        }
    }
    loop {
        if let Some(steps) = search.run(horizon, cap)? {
            return Ok(steps as f64 * dt);
        }
        horizon += (horizon / 50).max(1);
        if horizon > MAX_STEPS {
            return Err(PlanError::Unreachable);
        }
    }
}

struct Search {
    init: KinematicState,
    goal: KinematicState,
    jmax: f64,
    amax: f64,
    vmax: f64,
    dt: f64,
    v_tol: f64,
    x_tol: f64,
    /// Acceleration change of one step at full jerk.
    a_step: f64,
    /// Velocity lattice spacing.
    v_step: f64,
}

/// Lattice cell: acceleration index, velocity index and position interval.
#[derive(Debug, Clone, Copy)]
struct Cell {
    n: i32,
    m: i64,
    x_lo: f64,
    x_hi: f64,
}

impl Search {
    fn new(init: &KinematicState, goal: &KinematicState, limits: &KinematicLimits, dt: f64) -> Self {
        let (jmax, amax, vmax) = (limits.jmax(), limits.amax(), limits.vmax());
        Self {
            init: *init,
            goal: *goal,
            jmax,
            amax,
            vmax,
            dt,
            v_tol: GOAL_TOL.min(jmax * dt * dt),
            x_tol: {
                let d = (goal.x - init.x).abs();
                (GOAL_TOL * d.max(1.0))
                    .min(vmax * dt / 2.0)
                    .min((1e-2 * d).max(jmax * dt * dt * dt))
            },
            a_step: jmax * dt,
            v_step: 0.5 * jmax * dt * dt,
        }
    }

    fn accel(&self, n: i32) -> f64 {
        self.init.a + n as f64 * self.a_step
    }

    fn velocity(&self, k: usize, m: i64) -> f64 {
        self.init.v + k as f64 * self.init.a * self.dt + m as f64 * self.v_step
    }

    fn in_goal(&self, a: f64, v: f64, x_lo: f64, x_hi: f64) -> bool {
        (a - self.goal.a).abs() <= GOAL_TOL
            && (v - self.goal.v).abs() <= self.v_tol
            && x_hi >= self.goal.x - self.x_tol
            && x_lo <= self.goal.x + self.x_tol
    }

    fn admissible(&self, a: f64, v: f64) -> bool {
        if a.abs() > self.amax + EPS || v.abs() > self.vmax + EPS {
            return false;
        }
        // must still be able to bring the acceleration back to zero
        let settle = v + a * a.abs() / (2.0 * self.jmax);
        settle.abs() <= self.vmax + EPS
    }

    /// Envelopes for states with acceleration index `n` and `steps` steps to
    /// go.
    ///
    /// The per-step accelerations are boxed by the jerk bound from both ends
    /// and by `amax`; velocities by the running sums of those boxes from both
    /// ends and by `vmax`; the position by the sums of the velocity boxes.
    /// Each box contains every admissible discrete trajectory, so a goal
    /// outside the final position box is unreachable.
    fn envelope(&self, n: i32, steps: usize) -> Envelope {
        let (dt, ja) = (self.dt, self.a_step);
        let g = &self.goal;
        let a = self.accel(n);
        let slack_a = GOAL_TOL + EPS;
        if (g.a - a).abs() > steps as f64 * ja + slack_a {
            return Envelope::default();
        }
        let hi = |i: usize| {
            (a + i as f64 * ja)
                .min(g.a + slack_a + (steps - i) as f64 * ja)
                .min(self.amax)
        };
        let lo = |i: usize| {
            (a - i as f64 * ja)
                .max(g.a - slack_a - (steps - i) as f64 * ja)
                .max(-self.amax)
        };

        let mut back_hi = vec![0.0; steps + 1];
        let mut back_lo = vec![0.0; steps + 1];
        back_hi[steps] = g.v + self.v_tol;
        back_lo[steps] = g.v - self.v_tol;
        for i in (0..steps).rev() {
            back_hi[i] = back_hi[i + 1] - 0.5 * dt * (lo(i) + lo(i + 1));
            back_lo[i] = back_lo[i + 1] - 0.5 * dt * (hi(i) + hi(i + 1));
        }

        // velocity at step i lies in [v + lo_off, v + hi_off] before capping
        let mut env = Envelope {
            feasible: true,
            v_min: f64::NEG_INFINITY,
            v_max: f64::INFINITY,
            ..Envelope::default()
        };
        let (mut hi_off, mut lo_off) = (0.0, 0.0);
        let mut upper = Vec::with_capacity(steps);
        let mut lower = Vec::with_capacity(steps);
        for i in 0..steps {
            let cap_hi = back_hi[i].min(self.vmax);
            let cap_lo = back_lo[i].max(-self.vmax);
            if cap_lo > cap_hi + EPS {
                return Envelope::default();
            }
            env.v_max = env.v_max.min(cap_hi - lo_off + EPS);
            env.v_min = env.v_min.max(cap_lo - hi_off - EPS);
            let (h0, h1, l0, l1) = (hi(i), hi(i + 1), lo(i), lo(i + 1));
            env.x_hi_const += dt * dt * (2.0 * h0 + h1) / 6.0;
            env.x_lo_const += dt * dt * (2.0 * l0 + l1) / 6.0;
            upper.push((cap_hi - hi_off, hi_off, cap_hi));
            lower.push((cap_lo - lo_off, lo_off, cap_lo));
            hi_off += 0.5 * dt * (h0 + h1);
            lo_off += 0.5 * dt * (l0 + l1);
        }
        env.v_max = env.v_max.min(g.v + self.v_tol - lo_off);
        env.v_min = env.v_min.max(g.v - self.v_tol - hi_off);
        if env.v_min > env.v_max {
            return Envelope::default();
        }
        env.upper = SumOfMins::new(upper, dt);
        env.lower = SumOfMaxes::new(lower, dt);
        env.goal_lo = g.x - self.x_tol;
        env.goal_hi = g.x + self.x_tol;
        env
    }

    /// Breadth-first expansion up to `horizon` steps. Returns the first step
    /// holding a goal cell.
    fn run(&self, horizon: usize, cap: usize) -> Result<Option<usize>> {
        let (dt, j) = (self.dt, self.jmax);
        let mut layer = vec![Cell {
            n: 0,
            m: 0,
            x_lo: self.init.x,
            x_hi: self.init.x,
        }];
        let mut children: Vec<Cell> = Vec::new();
        let mut envelopes: Vec<Option<Envelope>> = Vec::new();
        // admissible acceleration indices lie in [n_base, n_base + n_span]
        let n_base = -((self.init.a + self.amax) / self.a_step).ceil() as i32 - 1;
        let n_span = (2.0 * self.amax / self.a_step).ceil() as usize + 3;
        for step in 1..=horizon {
            let remaining = horizon - step;
            envelopes.clear();
            envelopes.resize_with(n_span + 1, || None);
            children.clear();
            for cell in &layer {
                let a = self.accel(cell.n);
                let v = self.velocity(step - 1, cell.m);
                for s in [-1i32, 0, 1] {
                    let n = cell.n + s;
                    let m = cell.m + 2 * cell.n as i64 + s as i64;
                    let (ca, cv) = (self.accel(n), self.velocity(step, m));
                    if !self.admissible(ca, cv) {
                        continue;
                    }
                    let jerk = s as f64 * j;
                    let shift = dt * (v + dt * (0.5 * a + jerk * dt / 6.0));
                    let (x_lo, x_hi) = (cell.x_lo + shift, cell.x_hi + shift);
                    if self.in_goal(ca, cv, x_lo, x_hi) {
                        return Ok(Some(step));
                    }
                    let slot = (n - n_base) as usize;
                    let env = envelopes[slot].get_or_insert_with(|| self.envelope(n, remaining));
                    if env.admits(cv, x_lo, x_hi) {
                        children.push(Cell { n, m, x_lo, x_hi });
                    }
                }
            }
            if children.is_empty() {
                return Ok(None);
            }
            children.sort_unstable_by_key(|c| (c.n, c.m));
            layer.clear();
            for c in &children {
                match layer.last_mut() {
                    Some(last) if last.n == c.n && last.m == c.m => {
                        last.x_lo = last.x_lo.min(c.x_lo);
                        last.x_hi = last.x_hi.max(c.x_hi);
                    }
                    _ => layer.push(*c),
                }
            }
            if layer.len() > cap {
                return Err(PlanError::BudgetExceeded(cap));
            }
        }
        Ok(None)
    }
}

/// `Σ min(v + off_i, cap_i)·dt` as a function of the start velocity `v`.
#[derive(Debug, Clone, Default)]
struct SumOfMins {
    /// Thresholds `cap_i − off_i` in ascending order.
    thresholds: Vec<f64>,
    /// Prefix sums of `cap_i` in threshold order.
    capped: Vec<f64>,
    /// Suffix sums of `off_i` in threshold order.
    offsets: Vec<f64>,
    dt: f64,
}

impl SumOfMins {
    fn new(mut terms: Vec<(f64, f64, f64)>, dt: f64) -> Self {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = terms.len();
        let mut capped = vec![0.0; k + 1];
        let mut offsets = vec![0.0; k + 1];
        for i in 0..k {
            capped[i + 1] = capped[i] + terms[i].2;
        }
        for i in (0..k).rev() {
            offsets[i] = offsets[i + 1] + terms[i].1;
        }
        Self {
            thresholds: terms.iter().map(|t| t.0).collect(),
            capped,
            offsets,
            dt,
        }
    }

    fn eval(&self, v: f64) -> f64 {
        // terms with threshold below v are capped
        let p = self.thresholds.partition_point(|&t| t < v);
        let free = (self.thresholds.len() - p) as f64;
        self.dt * (self.capped[p] + free * v + self.offsets[p])
    }
}

/// `Σ max(v + off_i, floor_i)·dt` as a function of the start velocity `v`.
#[derive(Debug, Clone, Default)]
struct SumOfMaxes {
    /// Thresholds `floor_i − off_i` in ascending order.
    thresholds: Vec<f64>,
    /// Prefix sums of `off_i` in threshold order.
    offsets: Vec<f64>,
    /// Suffix sums of `floor_i` in threshold order.
    floors: Vec<f64>,
    dt: f64,
}

impl SumOfMaxes {
    fn new(mut terms: Vec<(f64, f64, f64)>, dt: f64) -> Self {
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = terms.len();
        let mut offsets = vec![0.0; k + 1];
        let mut floors = vec![0.0; k + 1];
        for i in 0..k {
            offsets[i + 1] = offsets[i] + terms[i].1;
        }
        for i in (0..k).rev() {
            floors[i] = floors[i + 1] + terms[i].2;
        }
        Self {
            thresholds: terms.iter().map(|t| t.0).collect(),
            offsets,
            floors,
            dt,
        }
    }

    fn eval(&self, v: f64) -> f64 {
        // terms with threshold at or below v follow v
        let p = self.thresholds.partition_point(|&t| t <= v);
        self.dt * (p as f64 * v + self.offsets[p] + self.floors[p])
    }
}

/// Reachability bounds shared by every state with the same acceleration and
/// number of steps to go.
#[derive(Debug, Clone, Default)]
struct Envelope {
    feasible: bool,
    v_min: f64,
    v_max: f64,
    x_hi_const: f64,
    x_lo_const: f64,
    upper: SumOfMins,
    lower: SumOfMaxes,
    goal_lo: f64,
    goal_hi: f64,
}

impl Envelope {
    fn admits(&self, v: f64, x_lo: f64, x_hi: f64) -> bool {
        if !self.feasible || v < self.v_min || v > self.v_max {
            return false;
        }
        let reach_hi = x_hi + self.x_hi_const + self.upper.eval(v);
        let reach_lo = x_lo + self.x_lo_const + self.lower.eval(v);
        reach_hi >= self.goal_lo - EPS && reach_lo <= self.goal_hi + EPS
    }
}
