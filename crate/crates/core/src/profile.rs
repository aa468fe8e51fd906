//! Constant-jerk segments, piecewise-cubic axis profiles and their exact
//! evaluation.
//!
//! Every planner in the crate produces an [`AxisProfile`]: an ordered chain of
//! [`CubicSegment`]s, each holding the state it starts from. Evolution inside a
//! segment uses the closed forms of the triple integrator, so evaluation is
//! exact at any time.

use std::fmt;

use crate::error::{PlanError, Result};

/// Segments shorter than this are dropped while building a profile.
pub const MIN_SEGMENT_DURATION: f64 = 1e-12;

/// Absolute tolerance used when matching boundary states.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Instantaneous acceleration, velocity and position of one axis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KinematicState {
    pub a: f64,
    pub v: f64,
    pub x: f64,
}

impl KinematicState {
    pub const fn new(a: f64, v: f64, x: f64) -> Self {
        Self { a, v, x }
    }

    /// Stopped at position `x`.
    pub const fn rest(x: f64) -> Self {
        Self { a: 0.0, v: 0.0, x }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.v.is_finite() && self.x.is_finite()
    }

    /// Point reflection through the origin of the (a, v, x) space.
    pub fn negated(&self) -> Self {
        Self::new(-self.a, -self.v, -self.x)
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &KinematicState) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.v - other.v).abs())
            .max((self.x - other.x).abs())
    }

    pub fn approx_eq(&self, other: &KinematicState, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl fmt::Display for KinematicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, v={}, x={})", self.a, self.v, self.x)
    }
}

/// Symmetric bounds on jerk, acceleration and velocity of one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicLimits {
    jmax: f64,
    amax: f64,
    vmax: f64,
}

impl KinematicLimits {
    /// Linear end-effector limits of the reference arm (m/s³, m/s², m/s).
    pub const LINEAR: KinematicLimits = KinematicLimits {
        jmax: 0.9,
        amax: 0.3,
        vmax: 0.15,
    };

    /// Angular end-effector limits of the reference arm (rad/s³, rad/s², rad/s).
    pub const ANGULAR: KinematicLimits = KinematicLimits {
        jmax: 0.6,
        amax: 0.2,
        vmax: 0.1,
    };

    pub fn new(jmax: f64, amax: f64, vmax: f64) -> Result<Self> {
        for (name, value) in [("jmax", jmax), ("amax", amax), ("vmax", vmax)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(PlanError::InvalidLimits(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        Ok(Self { jmax, amax, vmax })
    }

    pub fn jmax(&self) -> f64 {
        self.jmax
    }

    pub fn amax(&self) -> f64 {
        self.amax
    }

    pub fn vmax(&self) -> f64 {
        self.vmax
    }

    /// All three bounds multiplied by the same positive factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.jmax * factor, self.amax * factor, self.vmax * factor)
    }

    /// Whether `state` lies inside the acceleration and velocity bounds and
    /// can be brought to zero acceleration without leaving the velocity band.
    pub(crate) fn admits(&self, a: f64, v: f64, tol: f64) -> bool {
        if a.abs() > self.amax + tol || v.abs() > self.vmax + tol {
            return false;
        }
        let settle = v + a * a.abs() / (2.0 * self.jmax);
        settle.abs() <= self.vmax + tol
    }
}

/// Advances `start` by `dt` under constant `jerk`. No validation.
#[inline]
pub(crate) fn advance(start: &KinematicState, jerk: f64, dt: f64) -> KinematicState {
    let KinematicState { a, v, x } = *start;
    KinematicState {
        a: a + jerk * dt,
        v: v + dt * (a + 0.5 * jerk * dt),
        x: x + dt * (v + dt * (0.5 * a + jerk * dt / 6.0)),
    }
}

/// Exact constant-jerk evolution of `start` over `dt`.
pub fn integrate_segment(start: KinematicState, jerk: f64, dt: f64) -> Result<KinematicState> {
    if !start.is_finite() {
        return Err(PlanError::NonFinite("start state"));
    }
    if !jerk.is_finite() {
        return Err(PlanError::NonFinite("jerk"));
    }
    if !dt.is_finite() {
        return Err(PlanError::NonFinite("duration"));
    }
    if dt < 0.0 {
        return Err(PlanError::NegativeDuration(dt));
    }
    Ok(advance(&start, jerk, dt))
}

/// Which of the two saturated-jerk parabolas of the acceleration-velocity frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JerkBranch {
    /// Evolution at `+jmax`: `v = v0 + a²/(2 jmax)`.
    Max,
    /// Evolution at `-jmax`: `v = v0 - a²/(2 jmax)`.
    Min,
}

/// Velocity on a saturated-jerk parabola whose vertex (zero acceleration) is
/// at `v_at_zero_accel`.
pub fn phase_parabola(v_at_zero_accel: f64, a: f64, branch: JerkBranch, jmax: f64) -> f64 {
    let offset = a * a / (2.0 * jmax);
    match branch {
        JerkBranch::Max => v_at_zero_accel + offset,
        JerkBranch::Min => v_at_zero_accel - offset,
    }
}

/// One constant-jerk piece of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSegment {
    pub duration: f64,
    pub jerk: f64,
    pub start: KinematicState,
}

impl CubicSegment {
    pub fn end(&self) -> KinematicState {
        advance(&self.start, self.jerk, self.duration)
    }

    /// State `dt` seconds into the segment.
    pub fn state_at(&self, dt: f64) -> KinematicState {
        advance(&self.start, self.jerk, dt)
    }
}

/// Piecewise-cubic trajectory of one axis starting at time `t0`.
///
/// Segments chain: each segment starts where the previous one ends. An empty
/// profile still carries the state it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisProfile {
    t0: f64,
    origin: KinematicState,
    segments: Vec<CubicSegment>,
}

impl AxisProfile {
    /// Empty profile sitting at `origin`.
    pub fn new(t0: f64, origin: KinematicState) -> Self {
        Self {
            t0,
            origin,
            segments: Vec::new(),
        }
    }

    /// Builds a profile from `(jerk, duration)` pieces integrated from `origin`.
    pub fn from_pieces(t0: f64, origin: KinematicState, pieces: &[(f64, f64)]) -> Self {
        let mut profile = Self::new(t0, origin);
        for &(jerk, duration) in pieces {
            profile.push(jerk, duration);
        }
        profile
    }

    /// Stationary profile holding `state` (acceleration must be zero for this
    /// to be physical) for `duration`.
    pub fn dwell(t0: f64, state: KinematicState, duration: f64) -> Self {
        Self::from_pieces(t0, state, &[(0.0, duration)])
    }

    /// Appends a constant-jerk piece starting from the current end state.
    /// Pieces shorter than [`MIN_SEGMENT_DURATION`] are dropped.
    pub fn push(&mut self, jerk: f64, duration: f64) {
        if duration < MIN_SEGMENT_DURATION {
            return;
        }
        let start = self.end_state();
        self.segments.push(CubicSegment {
            duration,
            jerk,
            start,
        });
    }

    /// Appends the segments of `other`, which must start where `self` ends.
    pub fn extend_with(&mut self, other: &AxisProfile) -> Result<()> {
        let end = self.end_state();
        if !end.approx_eq(&other.start_state(), BOUNDARY_TOLERANCE) {
            return Err(PlanError::Discontinuity(self.end_time()));
        }
        if self.segments.is_empty() {
            // keep the exact start of the appended piece
            self.origin = other.origin;
        }
        self.segments.extend_from_slice(&other.segments);
        Ok(())
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn segments(&self) -> &[CubicSegment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn end_time(&self) -> f64 {
        self.t0 + self.duration()
    }

    pub fn start_state(&self) -> KinematicState {
        self.segments.first().map_or(self.origin, |s| s.start)
    }

    pub fn end_state(&self) -> KinematicState {
        self.segments.last().map_or(self.origin, CubicSegment::end)
    }

    /// Same profile with its start moved to `t0`.
    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    /// Every state, jerk and position negated.
    pub fn negated(&self) -> Self {
        Self {
            t0: self.t0,
            origin: self.origin.negated(),
            segments: self
                .segments
                .iter()
                .map(|s| CubicSegment {
                    duration: s.duration,
                    jerk: -s.jerk,
                    start: s.start.negated(),
                })
                .collect(),
        }
    }

    /// `offset + factor * profile`: an amplitude-scaled copy sharing the same
    /// timing.
    pub fn scaled(&self, factor: f64, offset: f64) -> Self {
        let map = |s: &KinematicState| KinematicState {
            a: s.a * factor,
            v: s.v * factor,
            x: offset + s.x * factor,
        };
        Self {
            t0: self.t0,
            origin: map(&self.origin),
            segments: self
                .segments
                .iter()
                .map(|s| CubicSegment {
                    duration: s.duration,
                    jerk: s.jerk * factor,
                    start: map(&s.start),
                })
                .collect(),
        }
    }

    /// State and jerk at absolute time `t`.
    pub fn evaluate(&self, t: f64) -> Result<(KinematicState, f64)> {
        let end = self.end_time();
        if !t.is_finite() {
            return Err(PlanError::NonFinite("time"));
        }
        let slack = 1e-12 * (1.0 + end.abs());
        if t < self.t0 - slack || t > end + slack {
            return Err(PlanError::OutOfSpan {
                t,
                start: self.t0,
                end,
            });
        }
        Ok(self.evaluate_clamped(t))
    }

    /// Like [`evaluate`](Self::evaluate) but clamps `t` into the span.
    pub fn evaluate_clamped(&self, t: f64) -> (KinematicState, f64) {
        let Some(last) = self.segments.last() else {
            return (self.origin, 0.0);
        };
        let mut local = (t - self.t0).max(0.0);
        for seg in &self.segments {
            if local <= seg.duration {
                return (seg.state_at(local), seg.jerk);
            }
            local -= seg.duration;
        }
        (last.end(), last.jerk)
    }

    /// Sub-profile covering `[from, to]` (absolute times, clamped to the
    /// span). The result starts at time `from`.
    pub fn slice(&self, from: f64, to: f64) -> Self {
        let from = from.max(self.t0);
        let to = to.min(self.end_time());
        let (start, _) = self.evaluate_clamped(from);
        let mut out = Self::new(from, start);
        if to <= from {
            return out;
        }
        let mut seg_start = self.t0;
        for seg in &self.segments {
            let seg_end = seg_start + seg.duration;
            let lo = seg_start.max(from);
            let hi = seg_end.min(to);
            if hi > lo {
                let piece_start = seg.state_at(lo - seg_start);
                if hi - lo >= MIN_SEGMENT_DURATION {
                    out.segments.push(CubicSegment {
                        duration: hi - lo,
                        jerk: seg.jerk,
                        start: piece_start,
                    });
                }
            }
            seg_start = seg_end;
        }
        out
    }

    /// Uniform sampling grid `t0 + k*dt` plus the exact end time.
    pub fn sample_times(&self, dt: f64) -> Vec<f64> {
        sample_grid(self.t0, self.end_time(), dt)
    }
}

/// Times `start + k*dt` up to `end`, with `end` itself always last.
pub fn sample_grid(start: f64, end: f64, dt: f64) -> Vec<f64> {
    assert!(dt > 0.0, "sampling period must be positive");
    let mut times = Vec::new();
    let mut k: u64 = 0;
    loop {
        let t = start + k as f64 * dt;
        if t >= end - 1e-9 {
            break;
        }
        times.push(t);
        k += 1;
    }
    times.push(end.max(start));
    times
}

/// Which bound a [`LimitViolation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Jerk,
    Acceleration,
    Velocity,
}

/// A segment during which a bound is exceeded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitViolation {
    pub kind: LimitKind,
    pub t_start: f64,
    pub t_end: f64,
    /// Extreme value reached inside the span (signed).
    pub value: f64,
}

/// Result of [`check_limits`]. Empty when the profile respects every bound.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LimitReport {
    pub violations: Vec<LimitViolation>,
}

impl LimitReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finds every segment where jerk, acceleration or velocity leaves its bound
/// by more than `tol`. Extrema are located analytically: acceleration is linear
/// inside a segment and velocity can only peak where acceleration vanishes.
pub fn check_limits(profile: &AxisProfile, limits: &KinematicLimits, tol: f64) -> LimitReport {
    let mut report = LimitReport::default();
    let mut t = profile.t0();
    for seg in profile.segments() {
        let t_end = t + seg.duration;
        let end = seg.end();
        let mut flag = |kind, value: f64, bound: f64| {
            if value.abs() > bound + tol {
                report.violations.push(LimitViolation {
                    kind,
                    t_start: t,
                    t_end,
                    value,
                });
            }
        };

        flag(LimitKind::Jerk, seg.jerk, limits.jmax());

        let a_peak = if seg.start.a.abs() >= end.a.abs() {
            seg.start.a
        } else {
            end.a
        };
        flag(LimitKind::Acceleration, a_peak, limits.amax());

        let mut v_peak = if seg.start.v.abs() >= end.v.abs() {
            seg.start.v
        } else {
            end.v
        };
        if seg.jerk != 0.0 {
            let t_zero = -seg.start.a / seg.jerk;
            if t_zero > 0.0 && t_zero < seg.duration {
                let v = seg.state_at(t_zero).v;
                if v.abs() > v_peak.abs() {
                    v_peak = v;
                }
            }
        }
        flag(LimitKind::Velocity, v_peak, limits.vmax());

        t = t_end;
    }
    report
}
