//! The longitudinal reduction of the coupled medium: displacements along the
//! propagation axis, rotations about it, both functions of `(z, t)` only.
//!
//! Under that ansatz the field equations collapse to a coupled pair for the
//! rotation angle `phi` and the axial displacement `psi`:
//!
//! ```text
//! phi_tt = M11 phi_zz + M12 psi_zz - m^2 sin(phi)
//! psi_tt = M21 phi_zz + M22 psi_zz
//! ```
//!
//! with the coupling matrix `M` built from the constitutive constants and
//! `m^2 = mu_c / rho_rot`. The pair admits an exact traveling-wave solution: a
//! sine-Gordon kink (or antikink) in `phi` dragging a proportional displacement
//! profile in `psi`. This module owns the coupling matrix, the dispersion algebra
//! relating wave number and speed, the closed-form solution, the discrete spatial
//! right-hand side, and a discrete energy that the semidiscrete flow conserves
//! exactly.

use crate::error::{Error, Result};
use crate::material::MaterialParams;

/// Spatial boundary handling for the 1D reduced system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMode {
    /// End points are held at their initial values (their accelerations are zero).
    /// Suitable for localized waves whose tails decay before the boundary.
    DirichletAsymptotic,
    /// Index arithmetic wraps; the grid covers `[z_min, z_max)`.
    Periodic,
}

/// The 2x2 matrix of squared-speed coefficients in the reduced wave system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingMatrix {
    /// `(kappa1 + 6 kappa3) / (3 rho_rot)` — squared rotational wave speed.
    pub m11: f64,
    /// `(3 chi1 - chi3) / (6 rho_rot)`.
    pub m12: f64,
    /// `2 (3 chi1 - chi3) / (3 rho)`.
    pub m21: f64,
    /// `(lambda + 2 mu) / rho` — squared elastic longitudinal wave speed.
    pub m22: f64,
}

impl CouplingMatrix {
    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Both eigenvalues, ascending. Errors if they are complex or if either is
    /// not positive: the reduced system is then not a pair of waves and explicit
    /// integration is meaningless.
    pub fn eigenvalues(&self) -> Result<(f64, f64)> {
        let disc = (self.m11 - self.m22) * (self.m11 - self.m22) + 4.0 * self.m12 * self.m21;
        if !(disc >= 0.0) {
            return Err(Error::NotHyperbolic {
                eig_min: f64::NAN,
                eig_max: f64::NAN,
            });
        }
        let half_gap = 0.5 * disc.sqrt();
        let mean = 0.5 * self.trace();
        let (lo, hi) = (mean - half_gap, mean + half_gap);
        if !(lo > 0.0) || !hi.is_finite() {
            return Err(Error::NotHyperbolic {
                eig_min: lo,
                eig_max: hi,
            });
        }
        Ok((lo, hi))
    }
}

/// Coupling matrix of the reduced system for the given constants.
pub fn coupling_matrix(p: &MaterialParams) -> CouplingMatrix {
    CouplingMatrix {
        m11: (p.kappa1 + 6.0 * p.kappa3) / (3.0 * p.rho_rot),
        m12: (3.0 * p.chi1 - p.chi3) / (6.0 * p.rho_rot),
        m21: 2.0 * (3.0 * p.chi1 - p.chi3) / (3.0 * p.rho),
        m22: (p.lambda + 2.0 * p.mu) / p.rho,
    }
}

/// Eigenvalues of the coupling matrix (ascending); errors when either fails to
/// be positive. Positive eigenvalues are the squared characteristic speeds.
pub fn hyperbolicity_check(m: &CouplingMatrix) -> Result<(f64, f64)> {
    m.eigenvalues()
}

/// Constitutive constants together with the derived reduced-system coefficients.
///
/// The fields are public so that verification code can probe inconsistent
/// combinations; [`ReducedParams::new`] always produces a consistent set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedParams {
    pub material: MaterialParams,
    pub matrix: CouplingMatrix,
    /// `mu_c / rho_rot`, the squared sine-Gordon mass parameter.
    pub m_sq: f64,
}

impl ReducedParams {
    pub fn new(material: MaterialParams) -> Result<Self> {
        material.validate()?;
        Ok(ReducedParams {
            material,
            matrix: coupling_matrix(&material),
            m_sq: material.mu_c / material.rho_rot,
        })
    }
}

/// Raw value of `k^2` dictated by the dispersion relation at speed `v`:
/// `k^2 = m^2 (M22 - v^2) / (v^4 - tr(M) v^2 + det(M))`.
/// May be negative (no traveling solution at this speed) or non-finite (at a
/// characteristic speed).
fn k_squared_at(rp: &ReducedParams, speed: f64) -> f64 {
    let v2 = speed * speed;
    let m = &rp.matrix;
    let quartic = v2 * v2 - m.trace() * v2 + m.det();
    rp.m_sq * (m.m22 - v2) / quartic
}

/// Residual of the dispersion relation tying the profile wave number `k` to the
/// propagation speed `v`:
/// `k^2 (v^4 - tr(M) v^2 + det(M)) - (M22 - v^2) mu_c / rho_rot`.
/// Zero (to round-off) exactly on admissible `(k, v)` pairs.
pub fn dispersion_residual(k: f64, speed: f64, rp: &ReducedParams) -> f64 {
    let v2 = speed * speed;
    let m = &rp.matrix;
    k * k * (v2 * v2 - m.trace() * v2 + m.det()) - (m.m22 - v2) * rp.m_sq
}

/// Profile orientation of the traveling wave: positive wave number (rotation
/// angle rising from 0 to 2 pi along `z`) or negative (falling from 2 pi to 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Kink,
    Antikink,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Kink => 1.0,
            Branch::Antikink => -1.0,
        }
    }
}

/// Signed wave number of the traveling wave at speed `v`.
///
/// Returns `0` when `mu_c = 0` (no localized profile; the system is a pair of
/// plane waves) and when `v^2 = M22` exactly (the profile width diverges).
/// Errors with the scanned admissible-speed windows when `k^2 < 0`, and with
/// [`Error::DegenerateDispersion`] when `v` sits on a characteristic speed where
/// the relation cannot be solved for `k`.
pub fn wave_number(rp: &ReducedParams, speed: f64, branch: Branch) -> Result<f64> {
    let v2 = speed * speed;
    let m = &rp.matrix;
    let quartic = v2 * v2 - m.trace() * v2 + m.det();
    let scale = v2 * v2 + m.trace().abs() * v2 + m.det().abs();
    if quartic.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateDispersion { speed });
    }
    let k_sq = rp.m_sq * (m.m22 - v2) / quartic;
    if k_sq < 0.0 || !k_sq.is_finite() {
        return Err(Error::NoSolitonAtSpeed {
            speed,
            k_squared: k_sq,
            windows: admissible_windows(rp),
        });
    }
    Ok(branch.sign() * k_sq.sqrt())
}

/// All non-negative squared speeds `v^2` solving the dispersion relation for a
/// given `k`, ascending. For `k = 0` with `mu_c > 0` the unique solution is
/// `v^2 = M22`; for `k -> inf` the solutions approach the eigenvalues of `M`.
pub fn solve_velocity(rp: &ReducedParams, k: f64) -> Result<Vec<f64>> {
    let m = &rp.matrix;
    let k2 = k * k;
    if k2 == 0.0 {
        if rp.m_sq == 0.0 {
            return Err(Error::InvalidParams(
                "dispersion relation is vacuous for k = 0 with mu_c = 0".into(),
            ));
        }
        return Ok(vec![m.m22]);
    }
    // k^2 v^4 + (m^2 - k^2 tr M) v^2 + (k^2 det M - m^2 M22) = 0, solved for v^2
    // with the cancellation-safe quadratic formula.
    let a = k2;
    let b = rp.m_sq - k2 * m.trace();
    let c = k2 * m.det() - rp.m_sq * m.m22;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots: Vec<f64> = if q == 0.0 {
        vec![0.0]
    } else {
        vec![q / a, c / q]
    };
    roots.retain(|r| r.is_finite() && *r >= 0.0);
    roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
    roots.dedup();
    Ok(roots)
}

/// Number of scan cells used to locate admissible-speed windows. The reference
/// constants produce a window only ~6e-4 wide, so the scan must be much finer
/// than that relative to the scanned range.
const WINDOW_SCAN_CELLS: usize = 20_000;
const WINDOW_BISECT_TOL: f64 = 1e-10;

/// Speed intervals `(v_lo, v_hi)` on which a traveling-wave profile exists
/// (`k^2 > 0`), found by scanning the sign of `k^2(v)` and bisecting each sign
/// change to `1e-10`. Windows narrower than the scan resolution
/// (range / 20000) can be missed; returns an empty list when `mu_c = 0`.
pub fn admissible_windows(rp: &ReducedParams) -> Vec<(f64, f64)> {
    if rp.m_sq == 0.0 {
        return Vec::new();
    }
    // Everything admissible lies below the largest characteristic speed; pad the
    // scan a little beyond it.
    let v_max = match rp.matrix.eigenvalues() {
        Ok((_, hi)) => 1.05 * hi.sqrt(),
        Err(_) => return Vec::new(),
    };
    let admissible = |v: f64| {
        let k2 = k_squared_at(rp, v);
        k2.is_finite() && k2 > 0.0
    };
    let bisect = |mut lo: f64, mut hi: f64, want_hi: bool| {
        // Invariant: admissible(lo) != admissible(hi); returns the crossing.
        while hi - lo > WINDOW_BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if admissible(mid) == want_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let h = v_max / WINDOW_SCAN_CELLS as f64;
    let mut windows = Vec::new();
    let mut open_at: Option<f64> = None;
    let mut prev = admissible(0.0);
    if prev {
        open_at = Some(0.0);
    }
    for i in 1..=WINDOW_SCAN_CELLS {
        let v = i as f64 * h;
        let here = admissible(v);
        if here != prev {
            let crossing = bisect(v - h, v, here);
            if here {
                open_at = Some(crossing);
            } else if let Some(lo) = open_at.take() {
                windows.push((lo, crossing));
            }
            prev = here;
        }
    }
    if let Some(lo) = open_at {
        windows.push((lo, v_max));
    }
    windows
}

/// Effective scalar wave speed after eliminating the displacement from the
/// rotation equation on traveling waves:
/// `c_eff = sqrt(M11 + M12 M21 / (v^2 - M22))`.
///
/// Rescaling `z = c_eff * z_hat` brings the rotation equation to the standard
/// form `phi_tt - phi_{z_hat z_hat} + m^2 sin(phi) = 0`.
pub fn rescale_z(rp: &ReducedParams, speed: f64) -> Result<f64> {
    let v2 = speed * speed;
    let m = &rp.matrix;
    let gap = v2 - m.m22;
    if gap.abs() <= 1e-12 * m.m22.abs().max(v2) {
        return Err(Error::DegenerateDispersion { speed });
    }
    let c_eff_sq = m.m11 + m.m12 * m.m21 / gap;
    if !(c_eff_sq > 0.0) {
        return Err(Error::NonPositiveWaveSpeed {
            speed,
            value: c_eff_sq,
        });
    }
    Ok(c_eff_sq.sqrt())
}

/// The closed-form traveling-wave pair:
///
/// ```text
/// phi(z, t) = 4 arctan exp(theta),      theta = k (z - v t) + delta
/// psi(z, t) = amplitude_psi * arctan exp(theta) + c1 + c2 (z - v t)
/// ```
///
/// with `amplitude_psi = -4 M21 / (M22 - v^2)`. All derivative evaluators are
/// analytic (hand-differentiated), safe against overflow of `exp` for large
/// arguments, and used both as initial data for integration and as the reference
/// in error measurements.
#[derive(Clone, Copy, Debug)]
pub struct SolitonSolution {
    /// Signed wave number (negative for the antikink branch).
    pub k: f64,
    /// Propagation speed.
    pub v: f64,
    /// Phase offset in the exponent.
    pub delta: f64,
    pub branch: Branch,
    /// `-4 M21 / (M22 - v^2)`, the displacement amplitude.
    pub amplitude_psi: f64,
    /// Additive integration constant of the displacement profile (zero here).
    pub c1: f64,
    /// Linear-in-`s` integration constant of the displacement profile (zero here).
    pub c2: f64,
}

impl SolitonSolution {
    /// Builds the traveling wave at speed `v` on the given branch.
    ///
    /// Fails when no profile exists at this speed (inadmissible `k^2`) or when
    /// `v^2` is too close to `M22` for the displacement amplitude to be finite.
    pub fn new(rp: &ReducedParams, speed: f64, delta: f64, branch: Branch) -> Result<Self> {
        let k = wave_number(rp, speed, branch)?;
        let gap = rp.matrix.m22 - speed * speed;
        if gap.abs() <= 1e-12 * rp.matrix.m22.abs().max(1.0) {
            return Err(Error::DegenerateDispersion { speed });
        }
        Ok(SolitonSolution {
            k,
            v: speed,
            delta,
            branch,
            amplitude_psi: -4.0 * rp.matrix.m21 / gap,
            c1: 0.0,
            c2: 0.0,
        })
    }

    fn theta(&self, z: f64, t: f64) -> f64 {
        self.k * (z - self.v * t) + self.delta
    }

    /// `sin(phi)` expressed directly in the profile variable:
    /// `sin(4 arctan e^theta) = -2 sech(theta) tanh(theta)`.
    fn sin_phi_at(theta: f64) -> f64 {
        let sech = 1.0 / theta.cosh();
        -2.0 * sech * theta.tanh()
    }

    pub fn phi(&self, z: f64, t: f64) -> f64 {
        4.0 * self.theta(z, t).exp().atan()
    }

    pub fn psi(&self, z: f64, t: f64) -> f64 {
        let s = z - self.v * t;
        self.amplitude_psi * (self.k * s + self.delta).exp().atan() + self.c1 + self.c2 * s
    }

    pub fn phi_z(&self, z: f64, t: f64) -> f64 {
        2.0 * self.k / self.theta(z, t).cosh()
    }

    pub fn phi_t(&self, z: f64, t: f64) -> f64 {
        -self.v * self.phi_z(z, t)
    }

    pub fn phi_zz(&self, z: f64, t: f64) -> f64 {
        self.k * self.k * Self::sin_phi_at(self.theta(z, t))
    }

    pub fn phi_tt(&self, z: f64, t: f64) -> f64 {
        self.v * self.v * self.phi_zz(z, t)
    }

    pub fn psi_z(&self, z: f64, t: f64) -> f64 {
        0.5 * self.amplitude_psi * self.k / self.theta(z, t).cosh() + self.c2
    }

    pub fn psi_t(&self, z: f64, t: f64) -> f64 {
        -self.v * self.psi_z(z, t)
    }

    pub fn psi_zz(&self, z: f64, t: f64) -> f64 {
        0.25 * self.amplitude_psi * self.k * self.k * Self::sin_phi_at(self.theta(z, t))
    }

    pub fn psi_tt(&self, z: f64, t: f64) -> f64 {
        self.v * self.v * self.psi_zz(z, t)
    }

    /// Position where the rotation angle crosses pi; `None` in the degenerate
    /// constant-profile case `k = 0`.
    pub fn center(&self, t: f64) -> Option<f64> {
        if self.k == 0.0 {
            None
        } else {
            Some(self.v * t - self.delta / self.k)
        }
    }
}

/// Accelerations `(phi_tt, psi_tt)` of the reduced system on a uniform grid with
/// spacing `dz`, using the compact three-point second difference.
///
/// With [`BoundaryMode::DirichletAsymptotic`] the end points get zero
/// acceleration (they are held by the integrator); with [`BoundaryMode::Periodic`]
/// the stencil wraps.
pub fn reduced_rhs(
    phi: &[f64],
    psi: &[f64],
    dz: f64,
    rp: &ReducedParams,
    bc: BoundaryMode,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = phi.len();
    if psi.len() != n {
        return Err(Error::FieldSizeMismatch {
            len: psi.len(),
            expected: n,
        });
    }
    if n < 5 {
        return Err(Error::InvalidState(format!(
            "reduced grid needs at least 5 points, got {n}"
        )));
    }
    if !(dz > 0.0) || !dz.is_finite() {
        return Err(Error::InvalidState(format!("invalid grid spacing {dz}")));
    }
    let inv_h2 = 1.0 / (dz * dz);
    let m = &rp.matrix;
    let mut phi_tt = vec![0.0; n];
    let mut psi_tt = vec![0.0; n];
    let second = |f: &[f64], i: usize| -> f64 {
        let (l, r) = match bc {
            BoundaryMode::Periodic => ((i + n - 1) % n, (i + 1) % n),
            BoundaryMode::DirichletAsymptotic => (i - 1, i + 1),
        };
        (f[r] - 2.0 * f[i] + f[l]) * inv_h2
    };
    for i in 0..n {
        if bc == BoundaryMode::DirichletAsymptotic && (i == 0 || i == n - 1) {
            continue;
        }
        let d2_phi = second(phi, i);
        let d2_psi = second(psi, i);
        phi_tt[i] = m.m11 * d2_phi + m.m12 * d2_psi - rp.m_sq * phi[i].sin();
        psi_tt[i] = m.m21 * d2_phi + m.m22 * d2_psi;
    }
    Ok((phi_tt, psi_tt))
}

/// Discrete energy of the reduced system:
///
/// ```text
/// E = sum_points w_i [ 2 rho_rot phi_t^2 + rho/2 psi_t^2 + 4 mu_c (1 - cos phi) ]
///   + sum_cells dz [ a (D phi)^2 + b (D psi)^2 + c (D phi)(D psi) ]
/// ```
///
/// with `D` the per-cell forward difference and coefficients
/// `a = 2 rho_rot M11 = (2/3)(kappa1 + 6 kappa3)`, `b = rho M22 / 2 =
/// (lambda + 2 mu)/2`, `c = rho M21 = (2/3)(3 chi1 - chi3)`. Placing the gradient
/// terms on cells (rather than differencing at points) makes the time derivative
/// of `E` along [`reduced_rhs`] telescope to exactly zero in the semidiscrete
/// limit, so any measured drift comes from the time integrator alone.
pub fn reduced_energy(
    phi: &[f64],
    psi: &[f64],
    phi_t: &[f64],
    psi_t: &[f64],
    dz: f64,
    rp: &ReducedParams,
    bc: BoundaryMode,
) -> Result<f64> {
    let n = phi.len();
    for f in [psi, phi_t, psi_t] {
        if f.len() != n {
            return Err(Error::FieldSizeMismatch {
                len: f.len(),
                expected: n,
            });
        }
    }
    if n < 5 {
        return Err(Error::InvalidState(format!(
            "reduced grid needs at least 5 points, got {n}"
        )));
    }
    if !(dz > 0.0) || !dz.is_finite() {
        return Err(Error::InvalidState(format!("invalid grid spacing {dz}")));
    }
    let p = &rp.material;
    let cell_a = 2.0 * p.rho_rot * rp.matrix.m11;
    let cell_b = 0.5 * p.rho * rp.matrix.m22;
    let cell_c = p.rho * rp.matrix.m21;
    let well = 4.0 * p.rho_rot * rp.m_sq;

    let mut point_sum = 0.0;
    for i in 0..n {
        let w = match bc {
            BoundaryMode::Periodic => dz,
            BoundaryMode::DirichletAsymptotic => {
                if i == 0 || i == n - 1 {
                    0.5 * dz
                } else {
                    dz
                }
            }
        };
        point_sum += w
            * (2.0 * p.rho_rot * phi_t[i] * phi_t[i]
                + 0.5 * p.rho * psi_t[i] * psi_t[i]
                + well * (1.0 - phi[i].cos()));
    }

    let mut cell_sum = 0.0;
    let cells = match bc {
        BoundaryMode::Periodic => n,
        BoundaryMode::DirichletAsymptotic => n - 1,
    };
    for i in 0..cells {
        let j = (i + 1) % n;
        let dphi = (phi[j] - phi[i]) / dz;
        let dpsi = (psi[j] - psi[i]) / dz;
        cell_sum += dz * (cell_a * dphi * dphi + cell_b * dpsi * dpsi + cell_c * dphi * dpsi);
    }
    Ok(point_sum + cell_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn reference() -> ReducedParams {
        ReducedParams::new(MaterialParams::reference()).unwrap()
    }

    #[test]
    fn coupling_matrix_hand_arithmetic() {
        // mu=2, lambda=3, mu_c=0.7, kappa1=1.2, kappa3=0.4, chi1=0.5, chi3=0.3,
        // rho=2, rho_rot=0.5:
        // M11 = (1.2 + 2.4)/1.5 = 2.4, M12 = (1.5 - 0.3)/3 = 0.4,
        // M21 = 2(1.2)/6 = 0.4,       M22 = (3 + 4)/2 = 3.5.
        let p = MaterialParams {
            mu: 2.0,
            lambda: 3.0,
            mu_c: 0.7,
            kappa1: 1.2,
            kappa2: 0.9,
            kappa3: 0.4,
            chi1: 0.5,
            chi3: 0.3,
            rho: 2.0,
            rho_rot: 0.5,
        };
        let m = coupling_matrix(&p);
        assert!((m.m11 - 2.4).abs() < 1e-15);
        assert!((m.m12 - 0.4).abs() < 1e-15);
        assert!((m.m21 - 0.4).abs() < 1e-15);
        assert!((m.m22 - 3.5).abs() < 1e-15);
    }

    #[test]
    fn coupling_vanishes_on_null_combination() {
        let mut p = MaterialParams::reference();
        p.chi1 = 0.0;
        p.chi3 = 0.0;
        let m = coupling_matrix(&p);
        assert_eq!(m.m12, 0.0);
        assert_eq!(m.m21, 0.0);
        // chi3 = 3 chi1 kills the printed combination exactly.
        p.chi1 = 0.37;
        p.chi3 = 3.0 * p.chi1;
        let m = coupling_matrix(&p);
        assert_eq!(m.m12, 0.0);
        assert_eq!(m.m21, 0.0);
    }

    #[test]
    fn eigenvalues_of_decoupled_matrix_are_the_diagonal() {
        let mut p = MaterialParams::reference();
        p.chi1 = 0.0;
        p.chi3 = 0.0;
        let m = coupling_matrix(&p);
        let (lo, hi) = hyperbolicity_check(&m).unwrap();
        assert!((lo - m.m11).abs() < 1e-14); // rotational speed^2 is the smaller one
        assert!((hi - m.m22).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let m = CouplingMatrix {
                m11: rng.gen_range(0.1..4.0),
                m12: rng.gen_range(0.0..0.5),
                m21: rng.gen_range(0.0..0.5),
                m22: rng.gen_range(0.1..4.0),
            };
            match m.eigenvalues() {
                Ok((lo, hi)) => {
                    for eig in [lo, hi] {
                        let char_poly = eig * eig - m.trace() * eig + m.det();
                        assert!(char_poly.abs() < 1e-12 * (eig * eig).max(1.0));
                    }
                    assert!(lo <= hi && lo > 0.0);
                }
                Err(Error::NotHyperbolic { .. }) => assert!(m.det() <= 0.0),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn strong_coupling_fails_hyperbolicity() {
        let mut p = MaterialParams::reference();
        p.chi1 = 5.0; // det M goes negative
        let m = coupling_matrix(&p);
        assert!(m.det() < 0.0);
        assert!(matches!(
            hyperbolicity_check(&m),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn dispersion_round_trip_is_tight() {
        let rp = reference();
        let windows = admissible_windows(&rp);
        assert!(!windows.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (lo, hi) = windows[rng.gen_range(0..windows.len())];
            // Stay a hair inside the window; its ends are poles/zeros.
            let v = lo + (hi - lo) * rng.gen_range(0.02..0.98);
            let k = match wave_number(&rp, v, Branch::Kink) {
                Ok(k) => k,
                Err(e) => panic!("speed {v} inside scanned window rejected: {e}"),
            };
            let raw = dispersion_residual(k, v, &rp);
            let v2 = v * v;
            let scale =
                (k * k * (v2 * v2 + rp.matrix.trace() * v2 + rp.matrix.det().abs())).max(rp.m_sq);
            assert!(raw.abs() < 1e-12 * scale, "v={v}: rel {}", raw.abs() / scale);
        }
    }

    #[test]
    fn zero_couple_modulus_gives_k_zero_and_eigen_speeds() {
        let mut p = MaterialParams::reference();
        p.mu_c = 0.0;
        let rp = ReducedParams::new(p).unwrap();
        assert_eq!(wave_number(&rp, 0.4, Branch::Kink).unwrap(), 0.0);
        assert_eq!(wave_number(&rp, 1.2, Branch::Antikink).unwrap(), 0.0);
        // The dispersion residual vanishes for any k at an eigen-speed.
        let (lo, hi) = rp.matrix.eigenvalues().unwrap();
        for eig in [lo, hi] {
            for k in [0.0, 0.3, 2.0, 17.0] {
                let r = dispersion_residual(k, eig.sqrt(), &rp);
                assert!(r.abs() < 1e-12 * (1.0 + k * k) * eig.max(1.0));
            }
            // And the speeds solved from any k are exactly the eigen-speeds.
            let roots = solve_velocity(&rp, 1.0).unwrap();
            assert_eq!(roots.len(), 2);
            assert!((roots[0] - lo).abs() < 1e-12 && (roots[1] - hi).abs() < 1e-12);
        }
        assert!(solve_velocity(&rp, 0.0).is_err());
        assert!(admissible_windows(&rp).is_empty());
    }

    #[test]
    fn solve_velocity_round_trips_and_has_eigenvalue_asymptote() {
        let rp = reference();
        for &v in &[0.1, 0.3, 0.6, 0.85] {
            let k = wave_number(&rp, v, Branch::Kink).unwrap();
            let roots = solve_velocity(&rp, k).unwrap();
            let hit = roots.iter().any(|r| (r - v * v).abs() < 1e-10 * (1.0 + v * v));
            assert!(hit, "v^2={} not among {roots:?}", v * v);
        }
        // k = 0 with mu_c > 0: the unique root is the elastic speed squared.
        assert_eq!(solve_velocity(&rp, 0.0).unwrap(), vec![rp.matrix.m22]);
        // Large k: both roots converge to the eigenvalues of M.
        let (lo, hi) = rp.matrix.eigenvalues().unwrap();
        let roots = solve_velocity(&rp, 1e6).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - lo).abs() < 1e-9);
        assert!((roots[1] - hi).abs() < 1e-9);
    }

    #[test]
    fn admissible_windows_match_eigenvalue_analysis() {
        // Sign analysis of k^2(v): admissible exactly on
        // [0, sqrt(eig_lo)) union (sqrt(M22), sqrt(eig_hi)).
        let rp = reference();
        let (lo, hi) = rp.matrix.eigenvalues().unwrap();
        let windows = admissible_windows(&rp);
        assert_eq!(windows.len(), 2, "windows {windows:?}");
        assert!(windows[0].0.abs() < 1e-9);
        assert!((windows[0].1 - lo.sqrt()).abs() < 1e-8, "{windows:?}");
        assert!((windows[1].0 - rp.matrix.m22.sqrt()).abs() < 1e-8, "{windows:?}");
        assert!((windows[1].1 - hi.sqrt()).abs() < 1e-8, "{windows:?}");
        // Speeds just inside/outside the first boundary behave accordingly.
        let edge = windows[0].1;
        assert!(wave_number(&rp, edge - 1e-6, Branch::Kink).is_ok());
        assert!(matches!(
            wave_number(&rp, edge + 1e-6, Branch::Kink),
            Err(Error::NoSolitonAtSpeed { .. })
        ));
    }

    #[test]
    fn rescale_z_reduces_to_rotational_speed_without_coupling() {
        let mut p = MaterialParams::reference();
        p.chi1 = 0.0;
        p.chi3 = 0.0;
        let rp = ReducedParams::new(p).unwrap();
        let c = rescale_z(&rp, 0.3).unwrap();
        assert!((c - rp.matrix.m11.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rescale_z_factor_squared_is_the_effective_coefficient() {
        let rp = reference();
        let v = 0.3;
        let c = rescale_z(&rp, v).unwrap();
        let expect =
            rp.matrix.m11 + rp.matrix.m12 * rp.matrix.m21 / (v * v - rp.matrix.m22);
        assert!((c * c - expect).abs() < 1e-14);
    }

    #[test]
    fn rescaled_soliton_satisfies_standard_sine_gordon() {
        // In the stretched coordinate z = c_eff z_hat, the rotation profile obeys
        // phi_tt - phi_{z_hat z_hat} + m^2 sin phi = 0 with analytic derivatives.
        let rp = reference();
        let v = 0.3;
        let sol = SolitonSolution::new(&rp, v, 0.2, Branch::Kink).unwrap();
        let c_eff = rescale_z(&rp, v).unwrap();
        let mut max_res: f64 = 0.0;
        for i in 0..200 {
            let z_hat = -15.0 + 0.15 * i as f64;
            let t = 0.8;
            let z = c_eff * z_hat;
            // phi_{z_hat z_hat} = c_eff^2 phi_zz.
            let res = sol.phi_tt(z, t) - c_eff * c_eff * sol.phi_zz(z, t)
                + rp.m_sq * sol.phi(z, t).sin();
            max_res = max_res.max(res.abs());
        }
        assert!(max_res < 1e-8, "standard-form residual {max_res:.3e}");
    }

    #[test]
    fn rescale_z_rejects_degenerate_and_nonpositive_speeds() {
        let rp = reference();
        assert!(matches!(
            rescale_z(&rp, rp.matrix.m22.sqrt()),
            Err(Error::DegenerateDispersion { .. })
        ));
        // Just below the elastic speed the effective coefficient is negative.
        let v = (rp.matrix.m22 - 1e-4).sqrt();
        assert!(matches!(
            rescale_z(&rp, v),
            Err(Error::NonPositiveWaveSpeed { .. })
        ));
    }

    #[test]
    fn soliton_limits_midpoint_and_half_width() {
        let rp = reference();
        let sol = SolitonSolution::new(&rp, 0.3, 0.0, Branch::Kink).unwrap();
        // Tails: 0 on the far left, 2 pi on the far right; pi at the center.
        assert!(sol.phi(-1e4, 0.0).abs() < 1e-12);
        assert!((sol.phi(1e4, 0.0) - 2.0 * PI).abs() < 1e-12);
        assert!((sol.phi(0.0, 0.0) - PI).abs() < 1e-12);
        assert_eq!(sol.center(0.0), Some(0.0));
        // Width of the phi in [pi/2, 3pi/2] band: closed-form inversion gives
        // z = ln(tan(phi/4))/k, so the width is ln(tan(3pi/8)/tan(pi/8))/k.
        let solve = |target: f64| {
            let (mut lo, mut hi) = (-50.0, 50.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sol.phi(mid, 0.0) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let width = solve(1.5 * PI) - solve(0.5 * PI);
        let expect = ((3.0 * PI / 8.0).tan() / (PI / 8.0).tan()).ln() / sol.k;
        assert!((width - expect).abs() < 1e-9, "width {width} vs {expect}");
    }

    #[test]
    fn soliton_psi_is_proportional_to_phi() {
        let rp = reference();
        let sol = SolitonSolution::new(&rp, 0.25, 0.7, Branch::Antikink).unwrap();
        for i in 0..100 {
            let z = -12.0 + 0.24 * i as f64;
            let t = 1.3;
            let expect = 0.25 * sol.amplitude_psi * sol.phi(z, t);
            assert!((sol.psi(z, t) - expect).abs() < 1e-14 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn soliton_derivative_evaluators_match_finite_differences() {
        let rp = reference();
        for branch in [Branch::Kink, Branch::Antikink] {
            let sol = SolitonSolution::new(&rp, 0.45, -0.3, branch).unwrap();
            let h = 1e-5;
            for i in 0..80 {
                let z = -8.0 + 0.2 * i as f64;
                let t = 0.6;
                let checks = [
                    (sol.phi_z(z, t), (sol.phi(z + h, t) - sol.phi(z - h, t)) / (2.0 * h)),
                    (sol.phi_t(z, t), (sol.phi(z, t + h) - sol.phi(z, t - h)) / (2.0 * h)),
                    (
                        sol.phi_zz(z, t),
                        (sol.phi_z(z + h, t) - sol.phi_z(z - h, t)) / (2.0 * h),
                    ),
                    (
                        sol.phi_tt(z, t),
                        (sol.phi_t(z, t + h) - sol.phi_t(z, t - h)) / (2.0 * h),
                    ),
                    (sol.psi_z(z, t), (sol.psi(z + h, t) - sol.psi(z - h, t)) / (2.0 * h)),
                    (sol.psi_t(z, t), (sol.psi(z, t + h) - sol.psi(z, t - h)) / (2.0 * h)),
                    (
                        sol.psi_zz(z, t),
                        (sol.psi_z(z + h, t) - sol.psi_z(z - h, t)) / (2.0 * h),
                    ),
                    (
                        sol.psi_tt(z, t),
                        (sol.psi_t(z, t + h) - sol.psi_t(z, t - h)) / (2.0 * h),
                    ),
                ];
                for (analytic, fd) in checks {
                    assert!(
                        (analytic - fd).abs() < 1e-7 * (1.0 + analytic.abs()),
                        "at z={z}: {analytic} vs {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_residual_vanishes_for_both_branches() {
        let rp = reference();
        for branch in [Branch::Kink, Branch::Antikink] {
            let sol = SolitonSolution::new(&rp, 0.3, 0.4, branch).unwrap();
            let m = &rp.matrix;
            let mut worst: f64 = 0.0;
            for i in 0..400 {
                let z = -40.0 + 0.2 * i as f64;
                for &t in &[0.0, 2.5, 17.0] {
                    let res_rot = m.m11 * sol.phi_zz(z, t) + m.m12 * sol.psi_zz(z, t)
                        - rp.m_sq * sol.phi(z, t).sin()
                        - sol.phi_tt(z, t);
                    let res_elastic = m.m21 * sol.phi_zz(z, t) + m.m22 * sol.psi_zz(z, t)
                        - sol.psi_tt(z, t);
                    worst = worst.max(res_rot.abs()).max(res_elastic.abs());
                }
            }
            assert!(worst < 1e-10, "{branch:?} residual {worst:.3e}");
        }
    }

    #[test]
    fn antikink_mirrors_kink_to_two_pi() {
        let rp = reference();
        let delta = 0.6;
        let kink = SolitonSolution::new(&rp, 0.3, delta, Branch::Kink).unwrap();
        let anti = SolitonSolution::new(&rp, 0.3, -delta, Branch::Antikink).unwrap();
        assert!((kink.center(0.7).unwrap() - anti.center(0.7).unwrap()).abs() < 1e-14);
        for i in 0..100 {
            let z = -10.0 + 0.2 * i as f64;
            let t = 0.7;
            let sum = kink.phi(z, t) + anti.phi(z, t);
            assert!((sum - 2.0 * PI).abs() < 1e-12, "sum {sum} at z={z}");
        }
    }

    #[test]
    fn traveling_invariance_is_exact_on_dyadic_shifts() {
        // z, v, t, dt all dyadic: the shifted argument computes the same bits.
        let rp = reference();
        let sol = SolitonSolution::new(&rp, 0.25, 0.5, Branch::Kink).unwrap();
        let dt = 2.0;
        for i in 0..64 {
            let z = -4.0 + 0.125 * i as f64;
            let t = 0.5;
            assert_eq!(sol.phi(z + sol.v * dt, t + dt), sol.phi(z, t));
            assert_eq!(sol.psi(z + sol.v * dt, t + dt), sol.psi(z, t));
        }
    }

    #[test]
    fn degenerate_solution_with_zero_couple_modulus_is_constant_and_valid() {
        let mut p = MaterialParams::reference();
        p.mu_c = 0.0;
        let rp = ReducedParams::new(p).unwrap();
        let sol = SolitonSolution::new(&rp, 0.3, 0.2, Branch::Kink).unwrap();
        assert_eq!(sol.k, 0.0);
        assert_eq!(sol.center(0.0), None);
        let m = &rp.matrix;
        for &z in &[-3.0, 0.0, 11.0] {
            assert_eq!(sol.phi(z, 0.0), sol.phi(0.0, 5.0)); // constant field
            let res_rot = m.m11 * sol.phi_zz(z, 0.0) + m.m12 * sol.psi_zz(z, 0.0)
                - rp.m_sq * sol.phi(z, 0.0).sin()
                - sol.phi_tt(z, 0.0);
            assert_eq!(res_rot, 0.0);
        }
    }

    #[test]
    fn soliton_rejects_speed_at_elastic_wave_speed() {
        let rp = reference();
        // v^2 = M22 is the boundary of the second window: k^2 = 0 there but the
        // displacement amplitude diverges.
        let v = rp.matrix.m22.sqrt();
        assert!(SolitonSolution::new(&rp, v, 0.0, Branch::Kink).is_err());
    }

    #[test]
    fn displacement_profile_double_integrates_its_curvature() {
        // Independent quadrature oracle: integrate the printed profile curvature
        //   g''(s) = [4 M21 k^2 / (M22 - v^2)] e^th (e^{2 th} - 1)/(e^{2 th} + 1)^2,
        // th = k s + delta, twice from the left tail and compare with the closed
        // form amplitude * arctan(e^th).
        let rp = reference();
        let v = 0.3;
        let sol = SolitonSolution::new(&rp, v, 0.1, Branch::Kink).unwrap();
        let gpp = |s: f64| {
            let th = sol.k * s + sol.delta;
            let e = th.exp();
            let e2 = e * e;
            4.0 * rp.matrix.m21 * sol.k * sol.k / (rp.matrix.m22 - v * v) * e * (e2 - 1.0)
                / ((e2 + 1.0) * (e2 + 1.0))
        };
        let s0 = -14.0;
        let mut g = sol.psi(s0, 0.0);
        let mut gp = sol.psi_z(s0, 0.0);
        let h = 1e-3;
        let steps = 28_000;
        let mut worst: f64 = 0.0;
        for i in 0..steps {
            let s = s0 + i as f64 * h;
            // RK4 for y' = (gp, gpp(s)); the forcing depends on s only.
            let (k1g, k1p) = (gp, gpp(s));
            let (k2g, k2p) = (gp + 0.5 * h * k1p, gpp(s + 0.5 * h));
            let (k3g, k3p) = (gp + 0.5 * h * k2p, gpp(s + 0.5 * h));
            let (k4g, k4p) = (gp + h * k3p, gpp(s + h));
            g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
            gp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            let s_next = s0 + (i + 1) as f64 * h;
            worst = worst.max((g - sol.psi(s_next, 0.0)).abs());
        }
        assert!(worst < 1e-8, "double-integration drift {worst:.3e}");
    }

    #[test]
    fn rhs_of_trivial_states_vanishes() {
        let rp = reference();
        let n = 64;
        let zeros = vec![0.0; n];
        let (a, b) = reduced_rhs(&zeros, &zeros, 0.1, &rp, BoundaryMode::Periodic).unwrap();
        assert!(a.iter().chain(b.iter()).all(|&x| x == 0.0));
        // phi = pi is the unstable equilibrium: sin(pi) is round-off small.
        let pis = vec![PI; n];
        let (a, b) =
            reduced_rhs(&pis, &zeros, 0.1, &rp, BoundaryMode::DirichletAsymptotic).unwrap();
        assert!(a.iter().all(|&x| x.abs() < 1e-15));
        assert!(b.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rhs_validates_inputs() {
        let rp = reference();
        assert!(matches!(
            reduced_rhs(&[0.0; 6], &[0.0; 5], 0.1, &rp, BoundaryMode::Periodic),
            Err(Error::FieldSizeMismatch { .. })
        ));
        assert!(reduced_rhs(&[0.0; 4], &[0.0; 4], 0.1, &rp, BoundaryMode::Periodic).is_err());
        assert!(reduced_rhs(&[0.0; 8], &[0.0; 8], 0.0, &rp, BoundaryMode::Periodic).is_err());
    }

    fn sample_soliton(n: usize, sol: &SolitonSolution) -> (Vec<f64>, Vec<f64>, f64) {
        let (z_min, z_max) = (-20.0, 20.0);
        let dz = (z_max - z_min) / (n - 1) as f64;
        let phi: Vec<f64> = (0..n).map(|i| sol.phi(z_min + i as f64 * dz, 0.0)).collect();
        let psi: Vec<f64> = (0..n).map(|i| sol.psi(z_min + i as f64 * dz, 0.0)).collect();
        (phi, psi, dz)
    }

    #[test]
    fn rhs_residual_on_soliton_converges_at_second_order() {
        let rp = reference();
        let sol = SolitonSolution::new(&rp, 0.3, 0.0, Branch::Kink).unwrap();
        let residual = |n: usize| -> f64 {
            let (phi, psi, dz) = sample_soliton(n, &sol);
            let (phi_tt, psi_tt) =
                reduced_rhs(&phi, &psi, dz, &rp, BoundaryMode::DirichletAsymptotic).unwrap();
            let mut worst: f64 = 0.0;
            for i in 1..n - 1 {
                let z = -20.0 + i as f64 * dz;
                worst = worst
                    .max((phi_tt[i] - sol.phi_tt(z, 0.0)).abs())
                    .max((psi_tt[i] - sol.psi_tt(z, 0.0)).abs());
            }
            worst
        };
        let coarse = residual(513);
        let fine = residual(1025);
        let ratio = coarse / fine;
        assert!(
            (2.8..5.5).contains(&ratio),
            "refinement ratio {ratio:.2} ({coarse:.3e} -> {fine:.3e})"
        );
    }

    #[test]
    fn rhs_and_energy_depend_on_chi_only_through_the_null_combination() {
        // chi1 = d, chi3 = 3d makes 3 chi1 - chi3 = 0 exactly in floating point,
        // so the outputs must be bit-identical to the chi-free medium.
        let mut with_null = MaterialParams::reference();
        let d = 0.123456789;
        with_null.chi1 = d;
        with_null.chi3 = 3.0 * d;
        let mut without = with_null;
        without.chi1 = 0.0;
        without.chi3 = 0.0;
        let rp_null = ReducedParams::new(with_null).unwrap();
        let rp_zero = ReducedParams::new(without).unwrap();

        let n = 97;
        let phi: Vec<f64> = (0..n).map(|i| (0.05 * i as f64).sin() * 1.3).collect();
        let psi: Vec<f64> = (0..n).map(|i| (0.03 * i as f64 - 1.0).cos() * 0.4).collect();
        let rates: Vec<f64> = (0..n).map(|i| 0.01 * i as f64).collect();
        for bc in [BoundaryMode::DirichletAsymptotic, BoundaryMode::Periodic] {
            let (a1, b1) = reduced_rhs(&phi, &psi, 0.2, &rp_null, bc).unwrap();
            let (a2, b2) = reduced_rhs(&phi, &psi, 0.2, &rp_zero, bc).unwrap();
            assert_eq!(a1, a2);
            assert_eq!(b1, b2);
            let e1 = reduced_energy(&phi, &psi, &rates, &rates, 0.2, &rp_null, bc).unwrap();
            let e2 = reduced_energy(&phi, &psi, &rates, &rates, 0.2, &rp_zero, bc).unwrap();
            assert_eq!(e1.to_bits(), e2.to_bits());
        }
    }

    #[test]
    fn rhs_and_energy_ignore_kappa2() {
        let mut p_hi = MaterialParams::reference();
        p_hi.kappa2 = 123.456;
        let rp_lo = reference();
        let rp_hi = ReducedParams::new(p_hi).unwrap();
        let n = 64;
        let phi: Vec<f64> = (0..n).map(|i| (0.1 * i as f64).sin()).collect();
        let psi: Vec<f64> = (0..n).map(|i| (0.07 * i as f64).cos()).collect();
        let (a1, b1) = reduced_rhs(&phi, &psi, 0.15, &rp_lo, BoundaryMode::Periodic).unwrap();
        let (a2, b2) = reduced_rhs(&phi, &psi, 0.15, &rp_hi, BoundaryMode::Periodic).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
        let e1 = reduced_energy(&phi, &psi, &psi, &phi, 0.15, &rp_lo, BoundaryMode::Periodic)
            .unwrap();
        let e2 = reduced_energy(&phi, &psi, &psi, &phi, 0.15, &rp_hi, BoundaryMode::Periodic)
            .unwrap();
        assert_eq!(e1.to_bits(), e2.to_bits());
        assert_eq!(
            wave_number(&rp_lo, 0.3, Branch::Kink).unwrap(),
            wave_number(&rp_hi, 0.3, Branch::Kink).unwrap()
        );
    }

    #[test]
    fn energy_of_zero_state_is_zero_and_decoupled_energies_add() {
        let mut p = MaterialParams::reference();
        p.mu_c = 0.0;
        p.chi1 = 0.0;
        p.chi3 = 0.0;
        let rp = ReducedParams::new(p).unwrap();
        let n = 80;
        let zeros = vec![0.0; n];
        assert_eq!(
            reduced_energy(&zeros, &zeros, &zeros, &zeros, 0.1, &rp, BoundaryMode::Periodic)
                .unwrap(),
            0.0
        );
        let phi: Vec<f64> = (0..n).map(|i| (0.2 * i as f64).sin()).collect();
        let psi: Vec<f64> = (0..n).map(|i| (0.15 * i as f64).cos()).collect();
        let phi_t: Vec<f64> = (0..n).map(|i| 0.01 * i as f64).collect();
        let psi_t: Vec<f64> = (0..n).map(|i| 0.3 - 0.005 * i as f64).collect();
        let both =
            reduced_energy(&phi, &psi, &phi_t, &psi_t, 0.1, &rp, BoundaryMode::Periodic).unwrap();
        let only_phi =
            reduced_energy(&phi, &zeros, &phi_t, &zeros, 0.1, &rp, BoundaryMode::Periodic)
                .unwrap();
        let only_psi =
            reduced_energy(&zeros, &psi, &zeros, &psi_t, 0.1, &rp, BoundaryMode::Periodic)
                .unwrap();
        assert!((both - only_phi - only_psi).abs() < 1e-12 * both.abs());
    }

    /// Classical RK4 on the reduced system; an independent time discretization
    /// used only to measure the semidiscrete energy drift.
    fn rk4_step(
        phi: &mut Vec<f64>,
        psi: &mut Vec<f64>,
        phi_t: &mut Vec<f64>,
        psi_t: &mut Vec<f64>,
        dz: f64,
        rp: &ReducedParams,
        bc: BoundaryMode,
        dt: f64,
    ) {
        let n = phi.len();
        let eval = |f: &Vec<f64>, g: &Vec<f64>| reduced_rhs(f, g, dz, rp, bc).unwrap();
        let lin = |base: &Vec<f64>, dir: &Vec<f64>, s: f64| -> Vec<f64> {
            (0..n).map(|i| base[i] + s * dir[i]).collect()
        };
        let (a1, b1) = eval(phi, psi);
        let (p2, s2) = (lin(phi, phi_t, 0.5 * dt), lin(psi, psi_t, 0.5 * dt));
        let (pt2, st2) = (lin(phi_t, &a1, 0.5 * dt), lin(psi_t, &b1, 0.5 * dt));
        let (a2, b2) = eval(&p2, &s2);
        let (p3, s3) = (lin(phi, &pt2, 0.5 * dt), lin(psi, &st2, 0.5 * dt));
        let (pt3, st3) = (lin(phi_t, &a2, 0.5 * dt), lin(psi_t, &b2, 0.5 * dt));
        let (a3, b3) = eval(&p3, &s3);
        let (p4, s4) = (lin(phi, &pt3, dt), lin(psi, &st3, dt));
        let (pt4, st4) = (lin(phi_t, &a3, dt), lin(psi_t, &b3, dt));
        let (a4, b4) = eval(&p4, &s4);
        for i in 0..n {
            phi[i] += dt / 6.0 * (phi_t[i] + 2.0 * pt2[i] + 2.0 * pt3[i] + pt4[i]);
            psi[i] += dt / 6.0 * (psi_t[i] + 2.0 * st2[i] + 2.0 * st3[i] + st4[i]);
            phi_t[i] += dt / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
            psi_t[i] += dt / 6.0 * (b1[i] + 2.0 * b2[i] + 2.0 * b3[i] + b4[i]);
        }
    }

    #[test]
    fn energy_is_conserved_along_the_semidiscrete_flow() {
        // The cell-based gradient terms make dE/dt telescope to zero exactly for
        // the semidiscrete system; integrating with a fine independent RK4 over a
        // unit time at dz = 1e-3 must show drift far below 1e-8.
        let rp = reference();
        let n = 1001;
        let dz = 1e-3;
        let bc = BoundaryMode::DirichletAsymptotic;
        let z = |i: usize| i as f64 * dz; // domain [0, 1]
        let mut phi: Vec<f64> = (0..n).map(|i| 0.8 * (PI * z(i)).sin()).collect();
        let mut psi: Vec<f64> = (0..n).map(|i| 0.3 * (2.0 * PI * z(i)).sin()).collect();
        let mut phi_t: Vec<f64> = (0..n).map(|i| 0.2 * (PI * z(i)).sin()).collect();
        let mut psi_t: Vec<f64> = vec![0.0; n];
        // Pin the ends (consistent with the Dirichlet right-hand side).
        phi_t[0] = 0.0;
        phi_t[n - 1] = 0.0;
        let e0 = reduced_energy(&phi, &psi, &phi_t, &psi_t, dz, &rp, bc).unwrap();
        assert!(e0 > 0.0);
        let dt = 2e-4;
        let steps = 5000; // unit time
        let mut max_drift: f64 = 0.0;
        for s in 0..steps {
            rk4_step(&mut phi, &mut psi, &mut phi_t, &mut psi_t, dz, &rp, bc, dt);
            if s % 250 == 249 {
                let e = reduced_energy(&phi, &psi, &phi_t, &psi_t, dz, &rp, bc).unwrap();
                max_drift = max_drift.max(((e - e0) / e0).abs());
            }
        }
        assert!(max_drift < 1e-8, "relative energy drift {max_drift:.3e}");
    }

    #[test]
    fn reduced_energy_matches_volume_energy_on_ansatz_fields() {
        // Cross-check against the 3D functional: sample the ansatz fields on a
        // thin slab, integrate (potential + kinetic) by the volume rule, divide by
        // the cross-section area, and compare with the 1D energy.
        use crate::energy::{total_energy, FieldGrid3, Integrand, PotentialForm};
        use crate::grid::{Grid3, Vec3Field};
        use crate::algebra::Vec3;

        let rp = reference();
        let p = rp.material;
        let (z_min, z_max) = (-8.0, 8.0);
        let nz = 257;
        let dz = (z_max - z_min) / (nz - 1) as f64;
        let grid = Grid3::new([5, 5, nz], [0.25, 0.25, dz], [0.0, 0.0, z_min]).unwrap();
        let phi_f = |z: f64| 0.9 * (-(z * z) / 4.0).exp();
        let psi_f = |z: f64| 0.5 * (-((z - 1.0) * (z - 1.0)) / 3.0).exp();
        let phi_t_f = |z: f64| 0.2 * (-(z * z) / 5.0).exp();
        let psi_t_f = |z: f64| -0.3 * (-(z * z) / 6.0).exp();

        let fields = FieldGrid3::new(
            Vec3Field::from_fn(grid, |[_, _, z]| Vec3::new(0.0, 0.0, psi_f(z))),
            Vec3Field::from_fn(grid, |[_, _, z]| Vec3::new(0.0, 0.0, phi_f(z))),
            Vec3Field::from_fn(grid, |[_, _, z]| Vec3::new(0.0, 0.0, psi_t_f(z))),
            Vec3Field::from_fn(grid, |[_, _, z]| Vec3::new(0.0, 0.0, phi_t_f(z))),
        )
        .unwrap();
        let pot = total_energy(&fields, &p, PotentialForm::Linearized, Integrand::Potential)
            .unwrap();
        let lag = total_energy(&fields, &p, PotentialForm::Linearized, Integrand::Lagrangian)
            .unwrap();
        let volume_total = 2.0 * pot - lag; // potential + kinetic
        let area = 0.25 * 4.0 * 0.25 * 4.0;

        let phi: Vec<f64> = (0..nz).map(|i| phi_f(z_min + i as f64 * dz)).collect();
        let psi: Vec<f64> = (0..nz).map(|i| psi_f(z_min + i as f64 * dz)).collect();
        let phi_t: Vec<f64> = (0..nz).map(|i| phi_t_f(z_min + i as f64 * dz)).collect();
        let psi_t: Vec<f64> = (0..nz).map(|i| psi_t_f(z_min + i as f64 * dz)).collect();
        let line = reduced_energy(
            &phi,
            &psi,
            &phi_t,
            &psi_t,
            dz,
            &rp,
            BoundaryMode::DirichletAsymptotic,
        )
        .unwrap();
        let rel = ((volume_total / area - line) / line).abs();
        assert!(rel < 2e-3, "volume vs line energy mismatch {rel:.3e}");
    }
}
