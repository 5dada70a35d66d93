//! Rotations from axial vectors: exponential map, its exact derivative with respect
//! to the axial vector, and polar decomposition of deformation gradients.
//!
//! All coefficient functions switch to truncated Taylor series below a small-angle
//! threshold so the maps stay smooth and accurate through `|a| -> 0`.

use crate::algebra::{axial_to_skew, eps, Mat3, Rank3, Vec3};
use crate::error::{Error, Result};

/// Below this rotation angle the trigonometric coefficient functions are replaced by
/// their Taylor expansions (truncation error ~ angle^6, far below round-off here).
const SMALL_ANGLE: f64 = 1e-4;

/// Maximum iterations for the orthogonalizing polar fixed point.
const POLAR_MAX_ITER: usize = 100;

/// Convergence tolerance for the polar fixed point (Frobenius step norm).
const POLAR_TOL: f64 = 1e-14;

/// sin(a)/a, series-safe.
fn sinc(a: f64) -> f64 {
    if a < SMALL_ANGLE {
        let a2 = a * a;
        1.0 - a2 / 6.0 + a2 * a2 / 120.0
    } else {
        a.sin() / a
    }
}

/// (1 - cos a)/a^2, series-safe.
fn versine_over_sq(a: f64) -> f64 {
    if a < SMALL_ANGLE {
        let a2 = a * a;
        0.5 - a2 / 24.0 + a2 * a2 / 720.0
    } else {
        (1.0 - a.cos()) / (a * a)
    }
}

/// (a cos a - sin a)/a^3, series-safe. Derivative weight of sinc along `a`.
fn d_sinc_over_a(a: f64) -> f64 {
    if a < SMALL_ANGLE {
        let a2 = a * a;
        -1.0 / 3.0 + a2 / 30.0 - a2 * a2 / 840.0
    } else {
        (a * a.cos() - a.sin()) / (a * a * a)
    }
}

/// (2(cos a - 1) + a sin a)/a^4, series-safe. Derivative weight of the versine term.
fn d_versine_over_a(a: f64) -> f64 {
    if a < SMALL_ANGLE {
        let a2 = a * a;
        -1.0 / 12.0 + a2 / 180.0 - a2 * a2 / 6720.0
    } else {
        (2.0 * (a.cos() - 1.0) + a * a.sin()) / (a * a * a * a)
    }
}

/// Exponential map: rotation matrix `exp(A)` for the antisymmetric `A` with axial
/// vector `a` (Rodrigues form `I + sinc |a| A + versine |a| A^2`).
pub fn rotation_exp(a: Vec3) -> Mat3 {
    let angle = a.norm();
    let skew = axial_to_skew(a);
    Mat3::IDENTITY + skew * sinc(angle) + skew * skew * versine_over_sq(angle)
}

/// Exact derivative of [`rotation_exp`] with respect to the axial vector:
/// `out[(i,j,k)] = d R_ij / d a_k`.
///
/// Closed four-term form; each coefficient is series-protected so the map limits to
/// `d R_ij / d a_k -> eps(i,k,j)` smoothly as `|a| -> 0`.
pub fn rotation_variation(a: Vec3) -> Rank3 {
    let angle = a.norm();
    let skew = axial_to_skew(a);
    let skew_sq = skew * skew;
    let c_sinc = sinc(angle);
    let c_vers = versine_over_sq(angle);
    let c_dsinc = d_sinc_over_a(angle);
    let c_dvers = d_versine_over_a(angle);

    let mut out = Rank3::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = c_dsinc * a[k] * skew[(i, j)];
                v += c_sinc * eps(i, k, j);
                v += c_dvers * a[k] * skew_sq[(i, j)];
                let delta_jk = if j == k { 1.0 } else { 0.0 };
                let delta_ik = if i == k { 1.0 } else { 0.0 };
                let delta_ij = if i == j { 1.0 } else { 0.0 };
                v += c_vers * (a[i] * delta_jk + a[j] * delta_ik - 2.0 * a[k] * delta_ij);
                out[(i, j, k)] = v;
            }
        }
    }
    out
}

/// Polar decomposition `F = R U` with `R` a proper rotation and `U` symmetric
/// positive definite, via the orthogonalizing fixed point `X <- (X + X^-T)/2`.
///
/// Requires `det F > 0`; reflections and singular gradients are rejected.
pub fn polar_decompose(f: Mat3) -> Result<(Mat3, Mat3)> {
    let det = f.det();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::NonInvertibleDeformation { det });
    }
    let mut x = f;
    for _ in 0..POLAR_MAX_ITER {
        let x_next = (x + x.inverse()?.transpose()) * 0.5;
        let step = (x_next - x).norm();
        x = x_next;
        if step <= POLAR_TOL * x.norm().max(1.0) {
            let rotation = x;
            let stretch = rotation.transpose() * f;
            return Ok((rotation, stretch));
        }
    }
    Err(Error::PolarNoConvergence {
        iterations: POLAR_MAX_ITER,
    })
}
