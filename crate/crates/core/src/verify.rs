//! Independent numerical verification of the analytic building blocks.
//!
//! Every check recomputes a claimed identity by a second route — finite
//! differences of the exact rotation exponential, discrete adjoints of the
//! volume potential, slope fits of linearization remainders, stencil-matched
//! comparators for the dimensional reduction, closed-form residuals of the
//! traveling wave — and reports the measured defect against a pinned
//! tolerance. Reports serialize as JSON lines so runs can be archived and
//! diffed bit for bit.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{axial_to_skew, Mat3, Vec3};
use crate::energy::{
    displacement_eom_rhs, v_coupling_full, v_coupling_model2, v_elastic_linear, v_interaction,
    FieldGrid3, PotentialForm,
};
use crate::error::{Error, Result};
use crate::grid::{
    dislocation_curvature, matrix_curl, vector_gradient, Grid3, Mat3Field, Vec3Field,
};
use crate::material::MaterialParams;
use crate::reduced::{
    dispersion_residual, reduced_rhs, wave_number, BoundaryMode, Branch, ReducedParams,
    SolitonSolution,
};
use crate::rotation::{polar_decompose, rotation_exp, rotation_variation};

/// Entrywise agreement demanded between the closed-form rotation derivative and
/// central finite differences of the exponential.
pub const ROTATION_VARIATION_TOL: f64 = 1e-7;
/// Permitted deviation of fitted convergence slopes from their exact orders.
pub const LINEARIZATION_SLOPE_TOL: f64 = 0.2;
/// Relative agreement demanded between the discrete force and finite
/// differences of the discrete potential.
pub const EOM_ADJOINT_TOL: f64 = 1e-6;
/// Absolute residual permitted when the closed-form traveling wave is inserted
/// into the reduced equations.
pub const SOLITON_RESIDUAL_TOL: f64 = 1e-10;
/// Longitudinal agreement demanded between the volume force and the reduced
/// right-hand side on smooth profiles at the pinned resolution.
pub const ANSATZ_GAUSSIAN_TOL: f64 = 1e-6;

/// Outcome of one verification check.
///
/// `pass` is equivalent to "the gated error is at most `tolerance`"; which of
/// the two errors gates is recorded under the `gate` metadata key. Reports with
/// non-finite numbers cannot be serialized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub metadata: BTreeMap<String, String>,
}

impl CheckReport {
    fn gated_on_abs(
        name: &str,
        max_abs_err: f64,
        max_rel_err: f64,
        tolerance: f64,
        mut metadata: BTreeMap<String, String>,
    ) -> Self {
        metadata.insert("gate".into(), "max_abs_err".into());
        CheckReport {
            name: name.into(),
            max_abs_err,
            max_rel_err,
            tolerance,
            pass: max_abs_err <= tolerance,
            metadata,
        }
    }

    fn gated_on_rel(
        name: &str,
        max_abs_err: f64,
        max_rel_err: f64,
        tolerance: f64,
        mut metadata: BTreeMap<String, String>,
    ) -> Self {
        metadata.insert("gate".into(), "max_rel_err".into());
        CheckReport {
            name: name.into(),
            max_abs_err,
            max_rel_err,
            tolerance,
            pass: max_rel_err <= tolerance,
            metadata,
        }
    }

    /// One JSON object per line; rejects non-finite numbers (JSON cannot
    /// represent them losslessly).
    pub fn to_json_line(&self) -> Result<String> {
        for v in [self.max_abs_err, self.max_rel_err, self.tolerance] {
            if !v.is_finite() {
                return Err(Error::InvalidState(format!(
                    "report '{}' holds a non-finite value and cannot be serialized",
                    self.name
                )));
            }
        }
        serde_json::to_string(self)
            .map_err(|e| Error::InvalidState(format!("report serialization failed: {e}")))
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line)
            .map_err(|e| Error::InvalidState(format!("malformed report line: {e}")))
    }
}

/// Compares the closed-form derivative of the rotation exponential against
/// central finite differences, over random axial vectors whose norms span
/// `(0, 2 pi)` plus fixed norms straddling the small-angle series switch.
pub fn check_rotation_variation(samples: usize, seed: u64) -> CheckReport {
    const SPECIAL_NORMS: [f64; 7] = [1e-8, 1e-5, 9.9e-5, 1.01e-4, 1.0, PI, 2.0 * PI - 1e-3];
    let fd_step = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for sample in 0..samples {
        let norm = if sample < SPECIAL_NORMS.len() {
            SPECIAL_NORMS[sample]
        } else {
            rng.gen_range(1e-6..2.0 * PI)
        };
        let cos_polar: f64 = rng.gen_range(-1.0..1.0);
        let azimuth: f64 = rng.gen_range(0.0..2.0 * PI);
        let sin_polar = (1.0 - cos_polar * cos_polar).sqrt();
        let a = Vec3::new(
            sin_polar * azimuth.cos(),
            sin_polar * azimuth.sin(),
            cos_polar,
        ) * norm;
        let variation = rotation_variation(a);
        for comp in 0..3 {
            let mut plus = a;
            plus[comp] += fd_step;
            let mut minus = a;
            minus[comp] -= fd_step;
            let fd = (rotation_exp(plus) - rotation_exp(minus)) * (0.5 / fd_step);
            let analytic = variation.slice(comp);
            let mut entry_err: f64 = 0.0;
            let mut entry_scale: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    entry_err = entry_err.max((analytic[(i, j)] - fd[(i, j)]).abs());
                    entry_scale = entry_scale.max(fd[(i, j)].abs());
                }
            }
            max_abs = max_abs.max(entry_err);
            max_rel = max_rel.max(entry_err / entry_scale.max(1e-12));
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("samples".into(), samples.to_string());
    metadata.insert("seed".into(), seed.to_string());
    metadata.insert("fd_step".into(), format!("{fd_step:e}"));
    CheckReport::gated_on_abs(
        "rotation_variation",
        max_abs,
        max_rel,
        ROTATION_VARIATION_TOL,
        metadata,
    )
}

/// Fits the convergence order of every linearization remainder in the chain
/// strain -> trace/symmetric part -> polar factors -> curvature -> coupling
/// energies over scale factors `{1e-1, 1e-2, 1e-3}` and demands each fitted
/// slope match its exact order (2 for the tensor remainders, 3 for the energy
/// remainders) within [`LINEARIZATION_SLOPE_TOL`].
pub fn check_linearization_chain() -> CheckReport {
    let g0 = Mat3([
        [0.21, -0.43, 0.11],
        [0.37, 0.05, -0.29],
        [-0.17, 0.31, 0.23],
    ]);
    let a0 = Vec3::new(0.4, -0.7, 0.5);
    let b0 = Mat3([
        [0.3, -0.2, 0.5],
        [0.1, 0.4, -0.3],
        [-0.5, 0.2, 0.6],
    ]);
    let p = MaterialParams::reference();
    let grid = Grid3::new([5, 5, 5], [0.3; 3], [-0.6; 3]).expect("static grid");
    let scales = [1e-1, 1e-2, 1e-3];
    let labels = [
        "strain_remainder",
        "strain_trace_remainder",
        "strain_sym_remainder",
        "stretch_remainder",
        "polar_rotation_remainder",
        "curvature_remainder",
        "coupling_vs_quadratic",
        "coupling_full_vs_small_strain",
    ];
    let orders = [2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 3.0, 3.0];
    let mut residuals = [[0.0f64; 3]; 8];

    for (col, &eps) in scales.iter().enumerate() {
        let g = g0 * eps;
        let a = a0 * eps;
        let f = Mat3::IDENTITY + g;
        let r = rotation_exp(a);
        let a_skew = axial_to_skew(a);
        let strain = r.transpose() * f - Mat3::IDENTITY;
        residuals[0][col] = (strain - (g - a_skew)).norm();
        residuals[1][col] = (strain.trace() - g.trace()).abs();
        residuals[2][col] = (strain.sym() - g.sym()).norm();
        let (polar_rotation, stretch) =
            polar_decompose(f).expect("perturbed identity is invertible");
        residuals[3][col] = (stretch - (Mat3::IDENTITY + g.sym())).norm();
        residuals[4][col] = (polar_rotation - (Mat3::IDENTITY + g.skew())).norm();

        // Curvature: exact rotations generated by a linear axial field, against
        // the curl of the plain skew field. Both stencils are exact on linear
        // data, so the measured gap is the quadratic remainder of the
        // exponential rather than discretization error.
        let axial_field = Vec3Field::from_fn(grid, |pos| {
            (b0 * Vec3::new(pos[0], pos[1], pos[2])) * eps
        });
        let skew_field = Mat3Field::new(
            grid,
            axial_field.data().iter().map(|&v| axial_to_skew(v)).collect(),
        )
        .expect("same grid");
        let rotation_field = Mat3Field::new(
            grid,
            axial_field.data().iter().map(|&v| rotation_exp(v)).collect(),
        )
        .expect("same grid");
        let linear_curl = matrix_curl(&skew_field);
        let curvature = dislocation_curvature(&rotation_field).expect("exact rotations");
        let mut worst: f64 = 0.0;
        for idx in grid.indices() {
            worst = worst.max((curvature.get(idx) - linear_curl.get(idx)).norm());
        }
        residuals[5][col] = worst;

        let full = v_coupling_full(f, r, &p).expect("invertible deformation");
        let quadratic = p.mu_c * (g.skew() - a_skew).norm_sq();
        residuals[6][col] = (full - quadratic).abs();
        residuals[7][col] = (full - v_coupling_model2(g, r, &p)).abs();
    }

    let slope_of = |r: &[f64; 3]| -> f64 {
        let xs: Vec<f64> = scales.iter().map(|e| e.ln()).collect();
        let ys: Vec<f64> = r.iter().map(|v| v.max(1e-300).ln()).collect();
        let x_mean = xs.iter().sum::<f64>() / 3.0;
        let y_mean = ys.iter().sum::<f64>() / 3.0;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
        let den: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
        num / den
    };

    let mut metadata = BTreeMap::new();
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    for i in 0..8 {
        let slope = slope_of(&residuals[i]);
        let deviation = (slope - orders[i]).abs();
        metadata.insert(format!("slope.{}", labels[i]), format!("{slope:.4}"));
        max_abs = max_abs.max(deviation);
        max_rel = max_rel.max(deviation / orders[i]);
    }
    CheckReport::gated_on_abs(
        "linearization_chain",
        max_abs,
        max_rel,
        LINEARIZATION_SLOPE_TOL,
        metadata,
    )
}

/// Confirms that the discrete force returned by the volume equation of motion
/// is the exact adjoint of the discrete potential: central finite differences
/// of an interior-point potential sum against `-dV *` force, at probe points
/// two layers inside a 7^3 grid, for the full constant set and for each energy
/// term in isolation.
///
/// The potential sums only interior points (where gradients use central
/// stencils) with uniform weight, which is what makes the adjoint identity
/// exact; the curvature energy is omitted because it does not depend on the
/// displacement. Term isolation zeroes the other constants directly, bypassing
/// constitutive admissibility on purpose.
pub fn check_displacement_eom(seed: u64) -> CheckReport {
    let grid = Grid3::new([7, 7, 7], [0.19, 0.23, 0.21], [-0.57, -0.69, -0.63])
        .expect("static grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_field = |scale: f64| -> Vec3Field {
        let data = (0..grid.len())
            .map(|_| {
                Vec3::new(
                    rng.gen_range(-scale..scale),
                    rng.gen_range(-scale..scale),
                    rng.gen_range(-scale..scale),
                )
            })
            .collect();
        Vec3Field::new(grid, data).expect("sized to grid")
    };
    let u0 = random_field(0.3);
    let axial = random_field(1.0);
    let rotation = Mat3Field::new(
        grid,
        axial.data().iter().map(|&a| rotation_exp(a)).collect(),
    )
    .expect("same grid");
    let curvature = dislocation_curvature(&rotation).expect("exact rotations");
    let fields = FieldGrid3::new_static(u0.clone(), axial.clone()).expect("shared grid");

    let reference = MaterialParams::reference();
    let runs: [(&str, MaterialParams); 6] = [
        ("full", reference),
        (
            "mu_only",
            MaterialParams {
                lambda: 0.0,
                mu_c: 0.0,
                chi1: 0.0,
                chi3: 0.0,
                ..reference
            },
        ),
        (
            "lambda_only",
            MaterialParams {
                mu: 0.0,
                mu_c: 0.0,
                chi1: 0.0,
                chi3: 0.0,
                ..reference
            },
        ),
        (
            "mu_c_only",
            MaterialParams {
                mu: 0.0,
                lambda: 0.0,
                chi1: 0.0,
                chi3: 0.0,
                ..reference
            },
        ),
        (
            "chi1_only",
            MaterialParams {
                mu: 0.0,
                lambda: 0.0,
                mu_c: 0.0,
                chi3: 0.0,
                ..reference
            },
        ),
        (
            "chi3_only",
            MaterialParams {
                mu: 0.0,
                lambda: 0.0,
                mu_c: 0.0,
                chi1: 0.0,
                ..reference
            },
        ),
    ];

    let counts = grid.counts();
    let spacing = grid.spacing();
    let dv = spacing[0] * spacing[1] * spacing[2];
    let potential = |u: &Vec3Field, p: &MaterialParams| -> f64 {
        let grad = vector_gradient(u);
        let mut sum = 0.0;
        for ix in 1..counts[0] - 1 {
            for iy in 1..counts[1] - 1 {
                for iz in 1..counts[2] - 1 {
                    let idx = [ix, iy, iz];
                    let g = grad.get(idx);
                    sum += dv
                        * (v_elastic_linear(g, p)
                            + v_interaction(curvature.get(idx), g, p, PotentialForm::Linearized)
                            + v_coupling_model2(g, rotation.get(idx), p));
                }
            }
        }
        sum
    };

    let mut metadata = BTreeMap::new();
    metadata.insert("seed".into(), seed.to_string());
    metadata.insert("grid".into(), "7x7x7".into());
    let mut max_abs: f64 = 0.0;
    let mut max_rel: f64 = 0.0;
    let mut scratch = u0.clone();
    for (label, p) in &runs {
        let force = displacement_eom_rhs(&fields, p).expect("valid fields");
        let mut scale: f64 = 0.0;
        for ix in 2..=4 {
            for iy in 2..=4 {
                for iz in 2..=4 {
                    let f = force.get([ix, iy, iz]);
                    for comp in 0..3 {
                        scale = scale.max((dv * f[comp]).abs());
                    }
                }
            }
        }
        // The potential is quadratic in u, so the central difference carries
        // no truncation error — only summation roundoff. At probe points where
        // the force components nearly cancel, a pointwise ratio would measure
        // that roundoff against a tiny value; flooring the denominator at a
        // fraction of the run's force scale keeps the measure meaningful. A
        // genuinely wrong small term still fails loudly in its isolated run,
        // where it sets the scale itself.
        let denom_floor = 0.05 * scale;
        let mut run_rel: f64 = 0.0;
        for ix in 2..=4 {
            for iy in 2..=4 {
                for iz in 2..=4 {
                    let idx = [ix, iy, iz];
                    for comp in 0..3 {
                        let base = u0.get(idx);
                        let h = 1e-6 * base[comp].abs().max(1.0);
                        let mut bumped = base;
                        bumped[comp] = base[comp] + h;
                        scratch.set(idx, bumped);
                        let plus = potential(&scratch, p);
                        bumped[comp] = base[comp] - h;
                        scratch.set(idx, bumped);
                        let minus = potential(&scratch, p);
                        scratch.set(idx, base);
                        let fd = (plus - minus) / (2.0 * h);
                        let expect = -dv * force.get(idx)[comp];
                        let denom = fd.abs().max(expect.abs()).max(denom_floor).max(1e-300);
                        let rel = (fd - expect).abs() / denom;
                        run_rel = run_rel.max(rel);
                        max_abs = max_abs.max((fd - expect).abs());
                    }
                }
            }
        }
        max_rel = max_rel.max(run_rel);
        metadata.insert(format!("rel.{label}"), format!("{run_rel:.3e}"));
    }
    CheckReport::gated_on_rel(
        "displacement_eom_adjoint",
        max_abs,
        max_rel,
        EOM_ADJOINT_TOL,
        metadata,
    )
}

/// Stencil applied along a sampled line, replicating the grid's derivative:
/// central in the interior, one-sided at the ends.
fn line_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)
            } else {
                (f[i + 1] - f[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// Builds the longitudinal ansatz fields on a slab, evaluates the full volume
/// force, and returns the largest transverse component together with the
/// largest gap between the longitudinal component and the reduced right-hand
/// side assembled from the same composed stencils.
fn ansatz_defect(
    grid: Grid3,
    p: &MaterialParams,
    rp: &ReducedParams,
    phi_fn: &dyn Fn(f64) -> f64,
    psi_fn: &dyn Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    let fields = FieldGrid3::new_static(
        Vec3Field::from_fn(grid, |pos| Vec3::new(0.0, 0.0, psi_fn(pos[2]))),
        Vec3Field::from_fn(grid, |pos| Vec3::new(0.0, 0.0, phi_fn(pos[2]))),
    )?;
    let force = displacement_eom_rhs(&fields, p)?;
    let mut transverse: f64 = 0.0;
    for idx in grid.indices() {
        let v = force.get(idx);
        transverse = transverse.max(v[0].abs()).max(v[1].abs());
    }
    let nz = grid.counts()[2];
    let h = grid.spacing()[2];
    let phi_line: Vec<f64> = (0..nz).map(|i| phi_fn(grid.position([2, 2, i])[2])).collect();
    let psi_line: Vec<f64> = (0..nz).map(|i| psi_fn(grid.position([2, 2, i])[2])).collect();
    let dd_phi = line_derivative(&line_derivative(&phi_line, h), h);
    let dd_psi = line_derivative(&line_derivative(&psi_line, h), h);
    let m = rp.matrix;
    let mut longitudinal: f64 = 0.0;
    for i in 0..nz {
        let comparator = p.rho * (m.m21 * dd_phi[i] + m.m22 * dd_psi[i]);
        longitudinal = longitudinal.max((force.get([2, 2, i])[2] - comparator).abs());
    }
    Ok((transverse, longitudinal))
}

/// Verifies that the volume equations collapse to the reduced pair on
/// longitudinal fields: transverse force components vanish, the longitudinal
/// component matches the reduced right-hand side built from the same composed
/// stencils (Gaussian profiles at the pinned tolerance; traveling-wave profiles
/// with the expected second-order refinement), the discrete curvature has the
/// two-entry diagonal structure, and the reduced path is bit-identical under
/// changes of the curvature constant that the reduction never reads.
pub fn check_ansatz_reduction() -> CheckReport {
    let p = MaterialParams::reference();
    let rp = ReducedParams::new(p).expect("reference constants are admissible");
    let mut defects: Vec<(&str, f64, f64)> = Vec::new();
    let mut metadata = BTreeMap::new();

    // Gaussian profiles on a slab resolving the bulk of both bumps.
    let nz = 256;
    let (z_min, z_max) = (-8.0, 8.0);
    let dz = (z_max - z_min) / (nz - 1) as f64;
    let grid = Grid3::new([5, 5, nz], [0.3, 0.3, dz], [-0.6, -0.6, z_min]).expect("slab grid");
    let phi_gauss = |z: f64| 0.25 * (-(z * z) / 4.0).exp();
    let psi_gauss = |z: f64| 0.2 * (-((z - 1.0) * (z - 1.0)) / 3.0).exp();
    let (transverse, longitudinal) = ansatz_defect(grid, &p, &rp, &phi_gauss, &psi_gauss)
        .expect("valid slab fields");
    defects.push(("transverse_force", transverse, 1e-10));
    defects.push(("gaussian_longitudinal", longitudinal, ANSATZ_GAUSSIAN_TOL));

    // Discrete curvature structure on the same rotation field: two equal
    // diagonal entries, an antisymmetric off-diagonal pair, zeros elsewhere.
    let rotation = Mat3Field::from_fn(grid, |pos| {
        rotation_exp(Vec3::new(0.0, 0.0, phi_gauss(pos[2])))
    });
    let curvature = dislocation_curvature(&rotation).expect("exact rotations");
    let mut structure: f64 = 0.0;
    for idx in grid.indices() {
        let k = curvature.get(idx);
        for &entry in &[
            k[(0, 2)],
            k[(1, 2)],
            k[(2, 0)],
            k[(2, 1)],
            k[(2, 2)],
            k[(0, 0)] - k[(1, 1)],
            k[(0, 1)] + k[(1, 0)],
        ] {
            structure = structure.max(entry.abs());
        }
    }
    defects.push(("curvature_structure", structure, 1e-12));

    // Traveling-wave profiles at two resolutions: the longitudinal gap is pure
    // discretization error of the compounded rotation stencil, second order.
    let sol = SolitonSolution::new(&rp, 0.3, 0.0, Branch::Kink).expect("admissible speed");
    let soliton_gap = |nz: usize| -> f64 {
        let dz = 40.0 / (nz - 1) as f64;
        let grid =
            Grid3::new([5, 5, nz], [0.3, 0.3, dz], [-0.6, -0.6, -20.0]).expect("slab grid");
        let (_, gap) = ansatz_defect(
            grid,
            &p,
            &rp,
            &|z| sol.phi(z, 0.0),
            &|z| sol.psi(z, 0.0),
        )
        .expect("valid slab fields");
        gap
    };
    let coarse = soliton_gap(384);
    let fine = soliton_gap(768);
    let ratio = coarse / fine;
    defects.push(("soliton_longitudinal", fine, 1e-3));
    defects.push(("soliton_refinement_ratio_gap", (ratio - 4.0).abs(), 1.6));
    metadata.insert("soliton_refinement_ratio".into(), format!("{ratio:.3}"));

    // A constant rotation with a linear displacement is force-free.
    let trivial_grid =
        Grid3::new([5, 5, 64], [0.3, 0.3, 0.25], [-0.6, -0.6, -8.0]).expect("slab grid");
    let trivial_fields = FieldGrid3::new_static(
        Vec3Field::from_fn(trivial_grid, |pos| Vec3::new(0.0, 0.0, 0.1 + 0.05 * pos[2])),
        Vec3Field::from_fn(trivial_grid, |_| Vec3::new(0.0, 0.0, 0.3)),
    )
    .expect("shared grid");
    let trivial_force = displacement_eom_rhs(&trivial_fields, &p).expect("valid fields");
    let mut uniform: f64 = 0.0;
    for idx in trivial_grid.indices() {
        let v = trivial_force.get(idx);
        uniform = uniform.max(v[0].abs()).max(v[1].abs()).max(v[2].abs());
    }
    defects.push(("uniform_state_force", uniform, 1e-12));

    // The reduced path never reads the second curvature constant: outputs must
    // be bit-identical under its variation.
    let mut p2 = p;
    p2.kappa2 = 17.5;
    let rp2 = ReducedParams::new(p2).expect("admissible");
    let n = 64;
    let phi_s: Vec<f64> = (0..n).map(|i| phi_gauss(-8.0 + 0.25 * i as f64)).collect();
    let psi_s: Vec<f64> = (0..n).map(|i| psi_gauss(-8.0 + 0.25 * i as f64)).collect();
    let lhs = reduced_rhs(&phi_s, &psi_s, 0.25, &rp, BoundaryMode::Periodic);
    let rhs2 = reduced_rhs(&phi_s, &psi_s, 0.25, &rp2, BoundaryMode::Periodic);
    let bitwise_equal = match (lhs, rhs2) {
        (Ok((a1, b1)), Ok((a2, b2))) => {
            a1 == a2
                && b1 == b2
                && wave_number(&rp, 0.3, Branch::Kink).ok() == wave_number(&rp2, 0.3, Branch::Kink).ok()
        }
        _ => false,
    };
    defects.push(("kappa2_sensitivity", if bitwise_equal { 0.0 } else { 1.0 }, 0.5));

    let mut max_rel: f64 = 0.0;
    for (label, raw, tol) in &defects {
        metadata.insert(format!("defect.{label}"), format!("{raw:.3e}"));
        metadata.insert(format!("tolerance.{label}"), format!("{tol:.1e}"));
        max_rel = max_rel.max(raw / tol);
    }
    CheckReport::gated_on_rel(
        "ansatz_reduction",
        longitudinal,
        max_rel,
        1.0,
        metadata,
    )
}

/// Closed-form residual check shared by the public entry point and the
/// cross-evaluation used in fault-injection tests: the traveling wave is built
/// from `rp_solution` and inserted into the reduced equations of `rp_medium`.
fn soliton_residual_between(
    name: &str,
    rp_solution: &ReducedParams,
    rp_medium: &ReducedParams,
    speed: f64,
    branch: Branch,
) -> Result<CheckReport> {
    let sol = SolitonSolution::new(rp_solution, speed, 0.3, branch)?;
    let m = rp_medium.matrix;
    let span = if sol.k == 0.0 {
        20.0
    } else {
        (30.0 / sol.k.abs()).clamp(5.0, 2000.0)
    };
    let mut max_abs: f64 = 0.0;
    let mut term_scale: f64 = 1e-300;
    for i in 0..=400 {
        let z = -span + 2.0 * span * i as f64 / 400.0;
        for &t in &[0.0, 1.3, 7.9] {
            let phi_zz = sol.phi_zz(z, t);
            let psi_zz = sol.psi_zz(z, t);
            let sine = rp_medium.m_sq * sol.phi(z, t).sin();
            let res_rot = m.m11 * phi_zz + m.m12 * psi_zz - sine - sol.phi_tt(z, t);
            let res_elastic = m.m21 * phi_zz + m.m22 * psi_zz - sol.psi_tt(z, t);
            max_abs = max_abs.max(res_rot.abs()).max(res_elastic.abs());
            for term in [
                m.m11 * phi_zz,
                m.m22 * psi_zz,
                sine,
                sol.phi_tt(z, t),
                sol.psi_tt(z, t),
            ] {
                term_scale = term_scale.max(term.abs());
            }
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("speed".into(), format!("{speed}"));
    metadata.insert("wave_number".into(), format!("{}", sol.k));
    metadata.insert(
        "dispersion_residual".into(),
        format!("{:e}", dispersion_residual(sol.k, speed, rp_medium)),
    );
    Ok(CheckReport::gated_on_abs(
        name,
        max_abs,
        max_abs / term_scale,
        SOLITON_RESIDUAL_TOL,
        metadata,
    ))
}

/// Inserts the closed-form traveling wave into both reduced equations over a
/// space-time sample and demands the residuals vanish to
/// [`SOLITON_RESIDUAL_TOL`].
pub fn check_soliton_residual(
    p: &MaterialParams,
    speed: f64,
    branch: Branch,
) -> Result<CheckReport> {
    let rp = ReducedParams::new(*p)?;
    let name = match branch {
        Branch::Kink => "soliton_residual_kink",
        Branch::Antikink => "soliton_residual_antikink",
    };
    soliton_residual_between(name, &rp, &rp, speed, branch)
}

/// Runs every check with its standard inputs. The same seed always produces
/// bit-identical reports.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    let reference = MaterialParams::reference();
    vec![
        check_rotation_variation(1000, seed),
        check_linearization_chain(),
        check_displacement_eom(seed.wrapping_add(1)),
        check_ansatz_reduction(),
        check_soliton_residual(&reference, 0.3, Branch::Kink)
            .expect("reference constants admit the subsonic traveling wave"),
        check_soliton_residual(&reference, 0.3, Branch::Antikink)
            .expect("reference constants admit the subsonic traveling wave"),
    ]
}
