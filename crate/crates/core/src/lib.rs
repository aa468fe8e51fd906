//! Soft-motion trajectory planning: minimal-time motions whose jerk,
//! acceleration and velocity stay inside symmetric bounds, built from
//! constant-jerk cubic segments.

pub mod adjust;
pub mod error;
pub mod general;
pub mod profile;
pub mod oracle;
pub mod orientation;
pub mod path;
pub mod ptp;
pub mod roots;
pub mod sync;
pub mod tracker;

pub use error::{PlanError, Result};
pub use profile::{
    check_limits, integrate_segment, phase_parabola, AxisProfile, CubicSegment, JerkBranch,
    KinematicLimits, KinematicState, LimitKind, LimitReport, LimitViolation,
};
pub use ptp::{plan_ptp_1d, ptp_saturation_threshold, ptp_timing, PtpTiming};
pub use roots::{solve_real_roots, Polynomial};
