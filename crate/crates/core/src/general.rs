//! Minimal-time motion between arbitrary boundary states.
//!
//! Motions come in two mirror-image families. A type 1 motion starts with a
//! `+jmax` piece and is planned as one of a finite set of segment templates:
//!
//! * a cruise at `+vmax` framed by two minimal-time velocity changes, or
//! * the five-piece pattern `+J, 0 @ a1, -J, 0 @ a2, +J` in which the middle
//!   plateaus exist only at `a1 = amax` / `a2 = -amax`.
//!
//! Each five-piece template leaves one free parameter once the velocity
//! balance is imposed; the position balance is then a polynomial in that
//! parameter, solved with [`solve_real_roots`]. The unsaturated template
//! (no plateau) is the intersection of three saturated-jerk parabolas and
//! yields a degree-six equation.
//!
//! A type 2 motion is obtained by planning the point-reflected problem as a
//! type 1 motion and flipping every sign.

use crate::error::{PlanError, Result};
use crate::profile::{
    check_limits, AxisProfile, KinematicLimits, KinematicState, BOUNDARY_TOLERANCE,
};
use crate::roots::{solve_real_roots, Polynomial};

/// Displacement tolerance under which a problem counts as a critical motion.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// Durations below this (in magnitude) are treated as rounding noise.
const DURATION_SLACK: f64 = 1e-9;

/// Which family a minimal-time motion belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionType {
    /// Starts with a `+jmax` piece; displacement above the critical length.
    Type1,
    /// Starts with a `-jmax` piece; displacement below the critical length.
    Type2,
    /// Displacement equals the critical length: the direct connection.
    Critical,
}

/// Acceleration and velocity of a boundary state (position free).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseState {
    pub a: f64,
    pub v: f64,
}

impl PhaseState {
    pub const fn new(a: f64, v: f64) -> Self {
        Self { a, v }
    }

    pub fn at(&self, x: f64) -> KinematicState {
        KinematicState::new(self.a, self.v, x)
    }
}

impl From<KinematicState> for PhaseState {
    fn from(s: KinematicState) -> Self {
        Self { a: s.a, v: s.v }
    }
}

/// `(jerk, duration)` pieces of a minimal-time change from `(a0, v0)` to
/// `(af, vf)` with no position constraint. At most three pieces: a jerk ramp,
/// an optional plateau at `±amax`, and a jerk ramp.
pub(crate) fn velocity_change(
    from: PhaseState,
    to: PhaseState,
    limits: &KinematicLimits,
) -> Vec<(f64, f64)> {
    let (j, amax) = (limits.jmax(), limits.amax());
    let (a0, af) = (from.a, to.a);
    let dv = to.v - from.v;
    // velocity gained by ramping the acceleration straight from a0 to af
    let direct = (af - a0).abs() * (af + a0) / (2.0 * j);
    let sign = if dv >= direct { 1.0 } else { -1.0 };
    // work in the orientation where the acceleration first rises
    let (a0, af, dv) = (sign * a0, sign * af, sign * dv);
    let peak_sq = j * dv + 0.5 * (a0 * a0 + af * af);
    let peak = peak_sq.max(0.0).sqrt().max(a0).max(af);
    let pieces = if peak <= amax {
        vec![(sign * j, (peak - a0) / j), (-sign * j, (peak - af) / j)]
    } else {
        let ramps = (2.0 * amax * amax - a0 * a0 - af * af) / (2.0 * j);
        vec![
            (sign * j, (amax - a0) / j),
            (0.0, ((dv - ramps) / amax).max(0.0)),
            (-sign * j, (amax - af) / j),
        ]
    };
    pieces.into_iter().map(|(jk, t)| (jk, t.max(0.0))).collect()
}

fn check_boundary(init: PhaseState, final_state: PhaseState, limits: &KinematicLimits) -> Result<()> {
    if !(init.a.is_finite() && init.v.is_finite() && final_state.a.is_finite() && final_state.v.is_finite()) {
        return Err(PlanError::NonFinite("boundary state"));
    }
    let tol = 1e-12;
    if !limits.admits(init.a, init.v, tol) {
        return Err(PlanError::InfeasibleBoundary(format!(
            "initial (a={}, v={}) cannot be held inside the limits",
            init.a, init.v
        )));
    }
    // arrival is the time-reversed departure
    if !limits.admits(final_state.a, -final_state.v, tol) {
        return Err(PlanError::InfeasibleBoundary(format!(
            "final (a={}, v={}) cannot be reached inside the limits",
            final_state.a, final_state.v
        )));
    }
    Ok(())
}

/// Direct minimal-time connection of two `(a, v)` states; its displacement is
/// the critical length.
pub fn connect(
    init: &KinematicState,
    final_state: PhaseState,
    limits: &KinematicLimits,
) -> Result<AxisProfile> {
    check_boundary(PhaseState::from(*init), final_state, limits)?;
    Ok(AxisProfile::from_pieces(
        0.0,
        *init,
        &velocity_change(PhaseState::from(*init), final_state, limits),
    ))
}

/// Displacement swept by the direct minimal-time connection of two states.
pub fn critical_length(
    init: PhaseState,
    final_state: PhaseState,
    limits: &KinematicLimits,
) -> Result<f64> {
    Ok(connect(&init.at(0.0), final_state, limits)?.end_state().x)
}

/// Type of the minimal-time motion covering `displacement`.
pub fn classify(
    init: PhaseState,
    final_state: PhaseState,
    displacement: f64,
    limits: &KinematicLimits,
) -> Result<MotionType> {
    let dc = critical_length(init, final_state, limits)?;
    Ok(classify_against(displacement, dc))
}

fn classify_against(displacement: f64, dc: f64) -> MotionType {
    if (displacement - dc).abs() <= CRITICAL_TOLERANCE {
        MotionType::Critical
    } else if displacement > dc {
        MotionType::Type1
    } else {
        MotionType::Type2
    }
}

/// Point reflection of a problem: accelerations, velocities and the
/// displacement change sign. Maps type 2 problems onto type 1 problems.
pub fn mirror_problem(
    init: PhaseState,
    final_state: PhaseState,
    displacement: f64,
) -> (PhaseState, PhaseState, f64) {
    (
        PhaseState::new(-init.a, -init.v),
        PhaseState::new(-final_state.a, -final_state.v),
        -displacement,
    )
}

/// Minimal-time profile from `init` to `final_state` within `limits`.
///
/// The result has at most seven segments with jerk in `{-jmax, 0, +jmax}`.
pub fn plan_min_time_1d(
    init: &KinematicState,
    final_state: &KinematicState,
    limits: &KinematicLimits,
) -> Result<AxisProfile> {
    if !init.is_finite() || !final_state.is_finite() {
        return Err(PlanError::NonFinite("boundary state"));
    }
    let direct = connect(init, PhaseState::from(*final_state), limits)?;
    let dc = direct.end_state().x - init.x;
    let displacement = final_state.x - init.x;
    let kind = classify_against(displacement, dc);
    if kind == MotionType::Critical {
        return Ok(direct);
    }

    let solve = |flip: bool| -> Option<AxisProfile> {
        if flip {
            let (i, f) = (init.negated(), final_state.negated());
            type1_profile(&i, &f, limits).map(|p| p.negated())
        } else {
            type1_profile(init, final_state, limits)
        }
    };
    let preferred = kind == MotionType::Type2;
    solve(preferred)
        .or_else(|| solve(!preferred))
        .ok_or_else(|| {
            PlanError::NoSolution(format!(
                "from {init} to {final_state} (critical length {dc})"
            ))
        })
}

/// Quantity of the form `num(u) / u^den` while building the template
/// equations symbolically.
#[derive(Debug, Clone)]
struct Frac {
    num: Polynomial,
    den: usize,
}

impl Frac {
    fn poly(p: Polynomial) -> Self {
        Self { num: p, den: 0 }
    }

    fn constant(c: f64) -> Self {
        Self::poly(Polynomial::constant(c))
    }

    fn add(&self, other: &Frac) -> Frac {
        let den = self.den.max(other.den);
        Frac {
            num: self.num.shift(den - self.den) + other.num.shift(den - other.den),
            den,
        }
    }

    fn mul(&self, other: &Frac) -> Frac {
        Frac {
            num: &self.num * &other.num,
            den: self.den + other.den,
        }
    }

    fn scale(&self, k: f64) -> Frac {
        Frac {
            num: self.num.scale(k),
            den: self.den,
        }
    }

    fn eval(&self, u: f64) -> f64 {
        self.num.eval(u) / u.powi(self.den as i32)
    }
}

/// Symbolic state advanced through pieces with symbolic durations.
struct SymbolicState {
    a: Frac,
    v: Frac,
    x: Frac,
}

impl SymbolicState {
    fn advance(&self, jerk: f64, t: &Frac) -> SymbolicState {
        let t2 = t.mul(t);
        let t3 = t2.mul(t);
        SymbolicState {
            a: self.a.add(&t.scale(jerk)),
            v: self.v.add(&self.a.mul(t)).add(&t2.scale(0.5 * jerk)),
            x: self
                .x
                .add(&self.v.mul(t))
                .add(&self.a.mul(&t2).scale(0.5))
                .add(&t3.scale(jerk / 6.0)),
        }
    }
}

/// The five piece durations of the no-cruise template, each a function of the
/// free parameter `u`.
struct Template {
    durations: [Frac; 5],
}

impl Template {
    /// Polynomial whose roots are the parameter values meeting the position
    /// balance.
    fn position_equation(&self, init: &KinematicState, target_x: f64, jerk: f64) -> Polynomial {
        let mut s = SymbolicState {
            a: Frac::constant(init.a),
            v: Frac::constant(init.v),
            x: Frac::constant(init.x),
        };
        for (t, jk) in self.durations.iter().zip([jerk, 0.0, -jerk, 0.0, jerk]) {
            s = s.advance(jk, t);
        }
        let residual = s.x.add(&Frac::constant(-target_x));
        residual.num
    }

    fn pieces(&self, u: f64, jerk: f64) -> Option<[(f64, f64); 5]> {
        let mut out = [(0.0, 0.0); 5];
        for (k, (t, jk)) in self
            .durations
            .iter()
            .zip([jerk, 0.0, -jerk, 0.0, jerk])
            .enumerate()
        {
            let d = t.eval(u);
            if !d.is_finite() || d < -DURATION_SLACK {
                return None;
            }
            out[k] = (jk, d.max(0.0));
        }
        Some(out)
    }
}

/// No-cruise templates for the type 1 problem `init -> final_state`.
fn templates(init: &KinematicState, final_state: &KinematicState, limits: &KinematicLimits) -> Vec<Template> {
    let (j, amax) = (limits.jmax(), limits.amax());
    let (a0, af) = (init.a, final_state.a);
    let dv = final_state.v - init.v;
    let u = || Frac::poly(Polynomial::x());
    let c = Frac::constant;
    let zero = || c(0.0);
    // velocity balance: dv = (2 a1² - 2 a2² + af² - a0²) / 2j + a1 t2 + a2 t6
    let base = (af * af - a0 * a0) / (2.0 * j);
    let mut out = Vec::new();

    // plateaus at both +amax and -amax; u = t2
    let shift = (base - dv) / amax;
    out.push(Template {
        durations: [
            c((amax - a0) / j),
            u(),
            c(2.0 * amax / j),
            u().add(&c(shift)),
            c((af + amax) / j),
        ],
    });

    // plateau at +amax only; u = a2
    let u2 = u().mul(&u());
    out.push(Template {
        durations: [
            c((amax - a0) / j),
            u2.scale(1.0 / (j * amax))
                .add(&c((dv - (2.0 * amax * amax + af * af - a0 * a0) / (2.0 * j)) / amax)),
            u().scale(-1.0 / j).add(&c(amax / j)),
            zero(),
            u().scale(-1.0 / j).add(&c(af / j)),
        ],
    });

    // plateau at -amax only; u = a1
    out.push(Template {
        durations: [
            u().scale(1.0 / j).add(&c(-a0 / j)),
            zero(),
            u().scale(1.0 / j).add(&c(amax / j)),
            u2.scale(1.0 / (j * amax))
                .add(&c((base - amax * amax / j - dv) / amax)),
            c((af + amax) / j),
        ],
    });

    // no plateau: a1² - a2² = k. With w = a1 + a2 and a1 - a2 = k / w the
    // durations are rational in w.
    let k = j * dv - 0.5 * (af * af - a0 * a0);
    let w = || Frac::poly(Polynomial::x());
    let inv_w = |p: Polynomial| Frac { num: p, den: 1 };
    if k != 0.0 {
        // a1 = (w² + k) / 2w,  a2 = (w² - k) / 2w
        out.push(Template {
            durations: [
                inv_w(Polynomial::new(vec![k, -2.0 * a0, 1.0]).scale(0.5 / j)),
                zero(),
                inv_w(Polynomial::constant(k / j)),
                zero(),
                inv_w(Polynomial::new(vec![k, 2.0 * af, -1.0]).scale(0.5 / j)),
            ],
        });
    }
    // a2 = -a1, the other branch of the degenerate hyperbola; u = a1
    out.push(Template {
        durations: [
            w().scale(1.0 / j).add(&c(-a0 / j)),
            zero(),
            w().scale(2.0 / j),
            zero(),
            w().scale(1.0 / j).add(&c(af / j)),
        ],
    });
    out
}

/// Best type 1 profile, if any template yields a valid one.
fn type1_profile(
    init: &KinematicState,
    final_state: &KinematicState,
    limits: &KinematicLimits,
) -> Option<AxisProfile> {
    let (j, vmax) = (limits.jmax(), limits.vmax());
    let displacement = final_state.x - init.x;
    let mut best: Option<AxisProfile> = None;
    let mut consider = |pieces: &[(f64, f64)]| {
        let profile = AxisProfile::from_pieces(0.0, *init, pieces);
        if !accept(&profile, final_state, limits) {
            return;
        }
        if best.as_ref().is_none_or(|b| profile.duration() < b.duration()) {
            best = Some(profile);
        }
    };

    // cruise at +vmax
    let up = velocity_change(PhaseState::from(*init), PhaseState::new(0.0, vmax), limits);
    let down = velocity_change(PhaseState::new(0.0, vmax), PhaseState::from(*final_state), limits);
    let swept = AxisProfile::from_pieces(0.0, PhaseState::from(*init).at(0.0), &up)
        .end_state()
        .x
        + AxisProfile::from_pieces(0.0, KinematicState::new(0.0, vmax, 0.0), &down)
            .end_state()
            .x;
    let cruise = (displacement - swept) / vmax;
    if cruise >= -DURATION_SLACK {
        let mut pieces = up.clone();
        pieces.push((0.0, cruise.max(0.0)));
        pieces.extend_from_slice(&down);
        consider(&pieces);
    }

    for template in templates(init, final_state, limits) {
        let equation = template
            .position_equation(init, final_state.x, j)
            .trimmed(1e-14);
        if equation.is_zero() || equation.degree() == 0 {
            continue;
        }
        let Ok(roots) = solve_real_roots(equation.coeffs()) else {
            continue;
        };
        for u in roots {
            if u == 0.0 && template.durations.iter().any(|d| d.den > 0) {
                continue;
            }
            if let Some(pieces) = template.pieces(u, j) {
                consider(&pieces);
            }
        }
    }
    best
}

/// Whether a candidate meets the boundary and stays inside the limits.
fn accept(profile: &AxisProfile, final_state: &KinematicState, limits: &KinematicLimits) -> bool {
    let end = profile.end_state();
    let scale = 1.0 + final_state.x.abs();
    end.max_abs_diff(final_state) <= BOUNDARY_TOLERANCE * scale
        && check_limits(profile, limits, BOUNDARY_TOLERANCE).is_empty()
}
