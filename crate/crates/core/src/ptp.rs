//! Rest-to-rest seven-segment planning.
//!
//! With null boundary accelerations and velocities the minimal-time motion is
//! symmetric: four jerk pieces of equal length `tj`, two acceleration plateaus
//! of length `ta` and one cruise of length `tv`. Which of them vanish is
//! decided by comparing the distance against two closed-form thresholds.

use crate::profile::{AxisProfile, KinematicLimits, KinematicState};

/// Durations of the symmetric rest-to-rest profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtpTiming {
    /// Length of each of the four saturated-jerk pieces.
    pub tj: f64,
    /// Length of each of the two acceleration plateaus.
    pub ta: f64,
    /// Length of the cruise at maximal velocity.
    pub tv: f64,
}

impl PtpTiming {
    pub const ZERO: PtpTiming = PtpTiming {
        tj: 0.0,
        ta: 0.0,
        tv: 0.0,
    };

    pub fn total(&self) -> f64 {
        4.0 * self.tj + 2.0 * self.ta + self.tv
    }

    /// Time at which the cruise segment starts.
    pub fn cruise_start(&self) -> f64 {
        2.0 * self.tj + self.ta
    }

    /// Time at which the cruise segment ends.
    pub fn cruise_end(&self) -> f64 {
        2.0 * self.tj + self.ta + self.tv
    }
}

/// Jerk and plateau durations of the ramp that reaches `vmax` from rest.
fn saturating_ramp(limits: &KinematicLimits) -> (f64, f64) {
    let (j, a, v) = (limits.jmax(), limits.amax(), limits.vmax());
    if v * j >= a * a {
        (a / j, v / a - a / j)
    } else {
        ((v / j).sqrt(), 0.0)
    }
}

/// Smallest distance for which the rest-to-rest motion reaches `vmax`
/// (and therefore has a zero-length cruise).
pub fn ptp_saturation_threshold(limits: &KinematicLimits) -> f64 {
    let (tj, ta) = saturating_ramp(limits);
    limits.vmax() * (2.0 * tj + ta)
}

/// Segment durations of the minimal-time rest-to-rest motion over `|distance|`.
pub fn ptp_timing(distance: f64, limits: &KinematicLimits) -> PtpTiming {
    let d = distance.abs();
    if d == 0.0 {
        return PtpTiming::ZERO;
    }
    let (j, a, v) = (limits.jmax(), limits.amax(), limits.vmax());

    let d_vel = ptp_saturation_threshold(limits);
    if d >= d_vel {
        let (tj, ta) = saturating_ramp(limits);
        return PtpTiming {
            tj,
            ta,
            tv: (d - d_vel) / v,
        };
    }

    // No cruise. The acceleration plateau appears once `amax` is reachable
    // before `vmax`, i.e. for distances beyond 2 amax³ / jmax².
    let tj_a = a / j;
    let d_acc = 2.0 * a * tj_a * tj_a;
    if v * j >= a * a && d >= d_acc {
        // d = amax (tj + ta)(2 tj + ta)
        let ta = 0.5 * (-3.0 * tj_a + (tj_a * tj_a + 4.0 * d / a).sqrt());
        PtpTiming {
            tj: tj_a,
            ta: ta.max(0.0),
            tv: 0.0,
        }
    } else {
        PtpTiming {
            tj: (d / (2.0 * j)).cbrt(),
            ta: 0.0,
            tv: 0.0,
        }
    }
}

/// Minimal-time rest-to-rest profile from position 0 to `distance`.
///
/// The jerk pattern is `[+J, 0, -J, 0, -J, 0, +J]`, mirrored for negative
/// distances. A zero distance gives an empty profile.
pub fn plan_ptp_1d(distance: f64, limits: &KinematicLimits) -> AxisProfile {
    let timing = ptp_timing(distance, limits);
    let profile = profile_from_timing(&timing, limits.jmax());
    if distance < 0.0 {
        profile.negated()
    } else {
        profile
    }
}

/// Builds the positive-direction profile from its timing.
pub(crate) fn profile_from_timing(timing: &PtpTiming, jmax: f64) -> AxisProfile {
    let PtpTiming { tj, ta, tv } = *timing;
    AxisProfile::from_pieces(
        0.0,
        KinematicState::default(),
        &[
            (jmax, tj),
            (0.0, ta),
            (-jmax, tj),
            (0.0, tv),
            (-jmax, tj),
            (0.0, ta),
            (jmax, tj),
        ],
    )
}
