//! Poses as seven coordinates (position plus a unit quaternion) and the
//! kinematic maps between angular velocity and quaternion rate.
//!
//! The quaternion components are planned as ordinary axes, synchronized with
//! the position axes. The planned quaternion leaves the unit sphere between
//! its endpoints; it is renormalized when sampled and the drift is reported.

use crate::error::{PlanError, Result};
use crate::profile::{AxisProfile, KinematicLimits};
use crate::sync::plan_synchronized;

/// Largest accepted deviation of a quaternion norm from 1.
pub const UNIT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub n: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(n: f64, i: f64, j: f64, k: f64) -> Self {
        Self { n, i, j, k }
    }

    /// Rotation of `angle` radians about `axis` (normalized here).
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = (0.5 * angle).sin_cos();
        Self::new(c, s * axis[0] / len, s * axis[1] / len, s * axis[2] / len)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.n, self.i, self.j, self.k]
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &Quaternion) -> f64 {
        self.n * o.n + self.i * o.i + self.j * o.j + self.k * o.k
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.n, -self.i, -self.j, -self.k)
    }

    pub fn normalized(&self) -> Self {
        let r = self.norm();
        Self::new(self.n / r, self.i / r, self.j / r, self.k / r)
    }

    /// Hamilton product `self ⊗ o`.
    pub fn mul(&self, o: &Quaternion) -> Self {
        Self::new(
            self.n * o.n - self.i * o.i - self.j * o.j - self.k * o.k,
            self.n * o.i + self.i * o.n + self.j * o.k - self.k * o.j,
            self.n * o.j - self.i * o.k + self.j * o.n + self.k * o.i,
            self.n * o.k + self.i * o.j - self.j * o.i + self.k * o.n,
        )
    }

    /// Errors unless the norm is within [`UNIT_TOLERANCE`] of 1.
    pub fn ensure_unit(&self) -> Result<()> {
        let r = self.norm();
        if !r.is_finite() || (r - 1.0).abs() > UNIT_TOLERANCE {
            return Err(PlanError::NonUnitQuaternion(r));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub p: [f64; 3],
    pub orient: Quaternion,
}

impl Pose {
    pub fn new(p: [f64; 3], orient: Quaternion) -> Self {
        Self { p, orient }
    }

    /// `x, y, z, n, i, j, k`.
    pub fn coordinates(&self) -> [f64; 7] {
        let q = self.orient;
        [self.p[0], self.p[1], self.p[2], q.n, q.i, q.j, q.k]
    }
}

/// Linear velocity (m/s) and angular velocity (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Twist {
    pub v: [f64; 3],
    pub w: [f64; 3],
}

/// Quaternion rate produced by angular velocity `w`: `½ Q Ω` in the
/// vector-first product used by [`qr_matrix`], which is the Hamilton product
/// `½ (0, w) ⊗ Q`.
pub fn omega_to_qdot(orient: &Quaternion, w: [f64; 3]) -> Result<Quaternion> {
    orient.ensure_unit()?;
    let r = Quaternion::new(0.0, w[0], w[1], w[2]).mul(orient);
    Ok(Quaternion::new(0.5 * r.n, 0.5 * r.i, 0.5 * r.j, 0.5 * r.k))
}

/// The 4×4 matrix `Qr`, acting on rates ordered `(i, j, k, n)`.
pub fn qr_matrix(q: &Quaternion) -> [[f64; 4]; 4] {
    let Quaternion { n, i, j, k } = *q;
    [
        [n, k, -j, i],
        [-k, n, i, j],
        [j, -i, n, k],
        [-i, -j, -k, n],
    ]
}

/// Angular velocity from a quaternion rate, `[Ω; r] = 2 Qrᵀ Q̇`. The fourth
/// component `r` vanishes for rates that preserve the norm and is returned
/// as a consistency check.
pub fn qdot_to_omega(orient: &Quaternion, qdot: &Quaternion) -> ([f64; 3], f64) {
    let m = qr_matrix(orient);
    let rate = [qdot.i, qdot.j, qdot.k, qdot.n];
    let mut out = [0.0; 4];
    for (c, o) in out.iter_mut().enumerate() {
        *o = 2.0 * (0..4).map(|r| m[r][c] * rate[r]).sum::<f64>();
    }
    ([out[0], out[1], out[2]], out[3])
}

/// Per-coordinate limits of a pose: linear limits for the position, and
/// angular limits halved for the quaternion components (`|Q̇| = ½|Ω|`).
pub fn pose_limits(linear: &KinematicLimits, angular: &KinematicLimits) -> Result<[KinematicLimits; 7]> {
    let q = angular.scaled(0.5)?;
    Ok([*linear, *linear, *linear, q, q, q, q])
}

/// `target` flipped if needed so that it lies in the same hemisphere as
/// `reference`.
pub fn same_hemisphere(reference: &Quaternion, target: &Quaternion) -> Quaternion {
    if reference.dot(target) < 0.0 {
        target.negated()
    } else {
        *target
    }
}

/// Seven synchronized profiles `x, y, z, n, i, j, k` from `pose0` to `posef`.
pub fn plan_pose_axes(
    pose0: &Pose,
    posef: &Pose,
    linear: &KinematicLimits,
    angular: &KinematicLimits,
) -> Result<Vec<AxisProfile>> {
    pose0.orient.ensure_unit()?;
    posef.orient.ensure_unit()?;
    let target = Pose::new(posef.p, same_hemisphere(&pose0.orient, &posef.orient));
    let limits = pose_limits(linear, angular)?;
    Ok(plan_synchronized(&pose0.coordinates(), &target.coordinates(), &limits)?.axes)
}

/// Pose at time `t` of seven profiles, with the orientation renormalized,
/// and the norm drift `|1 - |Q||` before renormalization.
pub fn sample_pose(axes: &[AxisProfile], t: f64) -> Result<(Pose, f64)> {
    if axes.len() != 7 {
        return Err(PlanError::DimensionMismatch(format!("{} pose axes", axes.len())));
    }
    let c: Vec<f64> = axes.iter().map(|p| p.evaluate_clamped(t).0.x).collect();
    let q = Quaternion::new(c[3], c[4], c[5], c[6]);
    let drift = (1.0 - q.norm()).abs();
    Ok((Pose::new([c[0], c[1], c[2]], q.normalized()), drift))
}

/// Largest quaternion norm drift over the sampling grid of period `dt`.
pub fn max_norm_drift(axes: &[AxisProfile], dt: f64) -> Result<f64> {
    let Some(first) = axes.first() else {
        return Ok(0.0);
    };
    first
        .sample_times(dt)
        .into_iter()
        .map(|t| sample_pose(axes, t).map(|(_, d)| d))
        .try_fold(0.0f64, |m, d| Ok(m.max(d?)))
}
