//! Rigid-body projection by shape matching.
//!
//! Each rigid group stores its reference shape (build pose). After every
//! integration step the mass-weighted best-fit rigid transform from the
//! reference shape to the members' current positions is computed and the
//! members are snapped onto the transformed reference:
//!
//! ```text
//! A = Σ mᵢ (xᵢ − c)(qᵢ − c̄)ᵀ      c, c̄: current and reference centroids
//! R = polar(A)                      rotation factor, det R = +1
//! xᵢ ← c + R (qᵢ − c̄)
//! ```
//!
//! Snapping preserves the group's centroid exactly, so linear momentum is
//! untouched. Member velocities are then replaced by the best-fit rigid
//! velocity field (v_cm, ω), which keeps linear momentum exactly and projects
//! out non-rigid velocity components.

use nalgebra::{Matrix3, Unit, Vector3};

use crate::structure::NodeId;

/// Rotation factor of the polar decomposition `A = R·S` with `det R = +1`.
///
/// Uses Higham's Newton iteration `X ← (X + X⁻ᵀ)/2`, which converges
/// quadratically for well-conditioned `A`; falls back to SVD when `A` is
/// singular or the iteration stalls.
#[must_use]
pub(crate) fn polar_rotation(a: &Matrix3<f64>) -> Matrix3<f64> {
    let det = a.determinant();
    let scale = a.norm();
    if scale <= 0.0 {
        return Matrix3::identity();
    }
    if det.abs() > 1e-12 * scale.powi(3) {
        let mut x = *a / scale;
        for _ in 0..30 {
            let inv_t = match x.try_inverse() {
                Some(inv) => inv.transpose(),
                None => break,
            };
            let next = (x + inv_t) * 0.5;
            let delta = (next - x).norm();
            x = next;
            if delta < 1e-14 {
                // Higham iteration preserves the sign of det, so a negative
                // determinant input would converge to a reflection; that case
                // is routed to the SVD path below.
                if x.determinant() > 0.0 {
                    return x;
                }
                break;
            }
        }
    }
    svd_rotation(a)
}

fn svd_rotation(a: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = a.svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Matrix3::identity(),
    };
    let mut r = u * v_t;
    if r.determinant() < 0.0 {
        // Flip the direction associated with the smallest singular value to
        // turn the reflection into a proper rotation.
        let mut u = u;
        u.column_mut(2).neg_mut();
        r = u * v_t;
    }
    r
}

/// Mass-weighted centroid of `points` (selected by `members` into the
/// per-node arrays).
pub(crate) fn weighted_centroid(
    members: &[NodeId],
    masses: &[f64],
    points: &[Vector3<f64>],
) -> (Vector3<f64>, f64) {
    let mut c = Vector3::zeros();
    let mut m_total = 0.0;
    for &id in members {
        let i = id.index();
        c += masses[i] * points[i];
        m_total += masses[i];
    }
    (c / m_total, m_total)
}

/// Best-fit rigid transform from a reference shape to current positions.
///
/// `reference[k]` corresponds to `positions[members[k]]`. Returns the
/// rotation and the pair of centroids (reference, current); the transform is
/// `x = c + R (q − c̄)`.
pub(crate) struct RigidFit {
    pub rotation: Matrix3<f64>,
    pub reference_centroid: Vector3<f64>,
    pub current_centroid: Vector3<f64>,
}

pub(crate) fn fit_rigid_transform(
    members: &[NodeId],
    masses: &[f64],
    reference: &[Vector3<f64>],
    positions: &[Vector3<f64>],
) -> RigidFit {
    let (c_cur, m_total) = weighted_centroid(members, masses, positions);
    let mut c_ref = Vector3::zeros();
    for (k, &id) in members.iter().enumerate() {
        c_ref += masses[id.index()] * reference[k];
    }
    c_ref /= m_total;

    let mut a = Matrix3::zeros();
    for (k, &id) in members.iter().enumerate() {
        let i = id.index();
        let p = positions[i] - c_cur;
        let q = reference[k] - c_ref;
        a += masses[i] * p * q.transpose();
    }
    RigidFit {
        rotation: polar_rotation(&a),
        reference_centroid: c_ref,
        current_centroid: c_cur,
    }
}

/// Snaps member positions onto the best-fit rigid placement of `reference`
/// and replaces member velocities with the best-fit rigid velocity field.
pub(crate) fn project_group(
    members: &[NodeId],
    masses: &[f64],
    reference: &[Vector3<f64>],
    positions: &mut [Vector3<f64>],
    velocities: &mut [Vector3<f64>],
) {
    let fit = fit_rigid_transform(members, masses, reference, positions);
    for (k, &id) in members.iter().enumerate() {
        positions[id.index()] =
            fit.current_centroid + fit.rotation * (reference[k] - fit.reference_centroid);
    }

    let (v_cm, omega) = fit_velocity_field(members, masses, positions, velocities, &fit.current_centroid);
    for &id in members {
        let i = id.index();
        let r = positions[i] - fit.current_centroid;
        velocities[i] = v_cm + omega.cross(&r);
    }
}

/// Best-fit rigid velocity field of a node set about `center`: v_cm from
/// total momentum, ω from angular momentum, L = I ω.
pub(crate) fn fit_velocity_field(
    members: &[NodeId],
    masses: &[f64],
    positions: &[Vector3<f64>],
    velocities: &[Vector3<f64>],
    center: &Vector3<f64>,
) -> (Vector3<f64>, Vector3<f64>) {
    let mut m_total = 0.0;
    let mut momentum = Vector3::zeros();
    for &id in members {
        let i = id.index();
        momentum += masses[i] * velocities[i];
        m_total += masses[i];
    }
    let v_cm = momentum / m_total;

    let mut angular = Vector3::zeros();
    let mut inertia = Matrix3::zeros();
    for &id in members {
        let i = id.index();
        let r = positions[i] - center;
        angular += masses[i] * r.cross(&(velocities[i] - v_cm));
        inertia += masses[i] * (Matrix3::identity() * r.norm_squared() - r * r.transpose());
    }
    let omega = solve_inertia(&inertia, &angular);
    (v_cm, omega)
}

/// Solves `I ω = L`, returning zero spin along directions the inertia tensor
/// cannot resolve (collinear groups).
fn solve_inertia(inertia: &Matrix3<f64>, angular: &Vector3<f64>) -> Vector3<f64> {
    let scale = inertia.norm();
    if scale <= 0.0 {
        return Vector3::zeros();
    }
    if inertia.determinant().abs() > 1e-12 * scale.powi(3) {
        if let Some(inv) = inertia.try_inverse() {
            return inv * angular;
        }
    }
    // Pseudo-inverse via SVD for degenerate shapes.
    let svd = inertia.svd(true, true);
    svd.solve(angular, 1e-12 * scale).unwrap_or_else(|_| Vector3::zeros())
}

/// Rotation of `point` about the line through `pivot` with direction `axis`.
#[must_use]
pub(crate) fn rotate_about_line(
    point: &Vector3<f64>,
    pivot: &Vector3<f64>,
    axis: &Unit<Vector3<f64>>,
    angle: f64,
) -> Vector3<f64> {
    let rot = nalgebra::Rotation3::from_axis_angle(axis, angle);
    pivot + rot * (point - pivot)
}
