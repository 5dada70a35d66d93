//! Energy densities of the coupled displacement/microrotation medium, their volume
//! integrals, and the displacement equation of motion.
//!
//! The potential has four contributions:
//!
//! * elastic: `mu ||sym(R^T F) - I||^2 + lambda/2 tr(sym(R^T F) - I)^2`, or its
//!   small-strain form with `grad u` in place of `R^T F - I`;
//! * curvature: `kappa1 ||dev sym K||^2 + kappa2 ||skew K||^2 + kappa3 tr(K)^2`
//!   with `K = R^T Curl R`;
//! * interaction: `chi1 tr(K) tr(.) + chi3 <dev sym K, dev sym .>`, the trace factor
//!   being `tr(R^T F)` in the full form and `tr(grad u)` in the linearized one;
//! * rotational coupling: full form `mu_c ||R^T polar(F) - I||^2`, reduced form
//!   `mu_c ||skew(grad u) - (R - I)||^2` (valid for small strains but finite
//!   rotations).
//!
//! The equation of motion `rho u_tt = Div S + ...` is provided in two discretely
//! identical forms: the stress-divergence form (the exact adjoint of the discrete
//! potential, which the variational checks rely on) and the expanded
//! Laplacian/grad-div form obtained from the two vector-calculus identities
//! `Div(2 sym grad u) = lap u + grad div u` and
//! `Div(2 skew grad u) = lap u - grad div u`.

use crate::algebra::{Mat3, Vec3};
use crate::error::Result;
use crate::grid::{
    dislocation_curvature, matrix_div, vector_gradient, Grid3, Mat3Field, Vec3Field,
};
use crate::material::MaterialParams;
use crate::rotation::{polar_decompose, rotation_exp, rotation_variation};

/// Which constitutive form the potential uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialForm {
    /// Finite-strain measures: `R^T F - I`, polar-based coupling.
    Full,
    /// Small-strain measures: `grad u`, rotation-difference coupling.
    Linearized,
}

/// What [`total_energy`] integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrand {
    /// Potential density alone.
    Potential,
    /// Potential minus kinetic density (the Lagrangian density).
    Lagrangian,
}

/// Displacement and microrotation fields (with their rates) sampled on one grid.
#[derive(Clone, Debug)]
pub struct FieldGrid3 {
    grid: Grid3,
    displacement: Vec3Field,
    axial: Vec3Field,
    displacement_rate: Vec3Field,
    axial_rate: Vec3Field,
}

impl FieldGrid3 {
    pub fn new(
        displacement: Vec3Field,
        axial: Vec3Field,
        displacement_rate: Vec3Field,
        axial_rate: Vec3Field,
    ) -> Result<Self> {
        let grid = *displacement.grid();
        for f in [&axial, &displacement_rate, &axial_rate] {
            if *f.grid() != grid {
                return Err(crate::error::Error::InvalidState(
                    "all fields must share one grid".into(),
                ));
            }
        }
        Ok(FieldGrid3 {
            grid,
            displacement,
            axial,
            displacement_rate,
            axial_rate,
        })
    }

    /// Static fields (zero rates).
    pub fn new_static(displacement: Vec3Field, axial: Vec3Field) -> Result<Self> {
        let grid = *displacement.grid();
        FieldGrid3::new(
            displacement,
            axial,
            Vec3Field::zeros(grid),
            Vec3Field::zeros(grid),
        )
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn displacement(&self) -> &Vec3Field {
        &self.displacement
    }

    pub fn displacement_mut(&mut self) -> &mut Vec3Field {
        &mut self.displacement
    }

    pub fn axial(&self) -> &Vec3Field {
        &self.axial
    }

    /// Rotation matrix at every point, `R = exp(axial^)`.
    pub fn rotation_field(&self) -> Mat3Field {
        let grid = self.grid;
        let data = self
            .axial
            .data()
            .iter()
            .map(|&a| rotation_exp(a))
            .collect();
        Mat3Field::new(grid, data).expect("rotation field inherits grid size")
    }
}

/// Elastic energy density, finite-strain form.
pub fn v_elastic(deformation: Mat3, rotation: Mat3, p: &MaterialParams) -> f64 {
    let strain = (rotation.transpose() * deformation).sym() - Mat3::IDENTITY;
    p.mu * strain.norm_sq() + 0.5 * p.lambda * strain.trace() * strain.trace()
}

/// Elastic energy density, small-strain form.
pub fn v_elastic_linear(grad_u: Mat3, p: &MaterialParams) -> f64 {
    let strain = grad_u.sym();
    p.mu * strain.norm_sq() + 0.5 * p.lambda * strain.trace() * strain.trace()
}

/// Curvature energy density on the dislocation curvature tensor.
pub fn v_curvature(curvature: Mat3, p: &MaterialParams) -> f64 {
    let (dev, skw, tr) = crate::algebra::cartan_decompose(curvature);
    p.kappa1 * dev.norm_sq() + p.kappa2 * skw.norm_sq() + p.kappa3 * tr * tr
}

/// Interaction energy density between curvature and strain.
///
/// `strain` is `R^T F - I` for [`PotentialForm::Full`] (the trace factor is then
/// `tr(R^T F) = tr(strain) + 3`) and `grad u` for [`PotentialForm::Linearized`].
pub fn v_interaction(curvature: Mat3, strain: Mat3, p: &MaterialParams, form: PotentialForm) -> f64 {
    let trace_factor = match form {
        PotentialForm::Full => strain.trace() + 3.0,
        PotentialForm::Linearized => strain.trace(),
    };
    p.chi1 * curvature.trace() * trace_factor + p.chi3 * curvature.dev_sym().inner(strain.dev_sym())
}

/// Rotational coupling density, full form `mu_c ||R^T polar(F) - I||^2`.
pub fn v_coupling_full(deformation: Mat3, rotation: Mat3, p: &MaterialParams) -> Result<f64> {
    let (continuum_rotation, _) = polar_decompose(deformation)?;
    Ok(p.mu_c * (rotation.transpose() * continuum_rotation - Mat3::IDENTITY).norm_sq())
}

/// Rotational coupling density, small-strain/finite-rotation form
/// `mu_c ||skew(grad u) - (R - I)||^2`.
pub fn v_coupling_model2(grad_u: Mat3, rotation: Mat3, p: &MaterialParams) -> f64 {
    let arg = grad_u.skew() - (rotation - Mat3::IDENTITY);
    p.mu_c * arg.norm_sq()
}

/// Kinetic energy density `rho/2 ||u_t||^2 + rho_rot ||R_t||^2`, with
/// `R_t = (dR/da) a_t` via the exact rotation derivative.
pub fn kinetic_density(
    displacement_rate: Vec3,
    axial: Vec3,
    axial_rate: Vec3,
    p: &MaterialParams,
) -> f64 {
    let rotation_rate = rotation_variation(axial).contract(axial_rate);
    0.5 * p.rho * displacement_rate.dot(displacement_rate) + p.rho_rot * rotation_rate.norm_sq()
}

/// Trapezoidal volume integral of the chosen energy density over the fields.
pub fn total_energy(
    fields: &FieldGrid3,
    p: &MaterialParams,
    form: PotentialForm,
    integrand: Integrand,
) -> Result<f64> {
    let grid = fields.grid;
    let rotation = fields.rotation_field();
    let curvature = dislocation_curvature(&rotation)?;
    let grad_u = vector_gradient(&fields.displacement);

    let mut sum = 0.0;
    for idx in grid.indices() {
        let g = grad_u.get(idx);
        let r = rotation.get(idx);
        let k = curvature.get(idx);
        let mut density = v_curvature(k, p)
            + match form {
                PotentialForm::Full => {
                    let f = Mat3::IDENTITY + g;
                    let strain = r.transpose() * f - Mat3::IDENTITY;
                    v_elastic(f, r, p)
                        + v_interaction(k, strain, p, PotentialForm::Full)
                        + v_coupling_full(f, r, p)?
                }
                PotentialForm::Linearized => {
                    v_elastic_linear(g, p)
                        + v_interaction(k, g, p, PotentialForm::Linearized)
                        + v_coupling_model2(g, r, p)
                }
            };
        if integrand == Integrand::Lagrangian {
            density -= kinetic_density(
                fields.displacement_rate.get(idx),
                fields.axial.get(idx),
                fields.axial_rate.get(idx),
                p,
            );
        }
        sum += grid.quad_weight(idx) * density;
    }
    Ok(sum)
}

/// The force density conjugate to `u` in the small-strain potential: the total
/// stress whose divergence drives `rho u_tt`.
fn total_stress(grad_u: Mat3, rotation: Mat3, curvature: Mat3, p: &MaterialParams) -> Mat3 {
    grad_u.sym() * (2.0 * p.mu)
        + Mat3::IDENTITY * (p.lambda * grad_u.trace())
        + (grad_u.skew() - rotation.skew()) * (2.0 * p.mu_c)
        + Mat3::IDENTITY * (p.chi1 * curvature.trace())
        + curvature.dev_sym() * p.chi3
}

/// Right-hand side of `rho u_tt = ...` for the small-strain potential, computed as
/// the discrete divergence of the total stress (elastic + rotational coupling +
/// curvature interaction). This is the exact discrete adjoint of the potential's
/// `u`-dependence at interior points.
pub fn displacement_eom_rhs(fields: &FieldGrid3, p: &MaterialParams) -> Result<Vec3Field> {
    let rotation = fields.rotation_field();
    let curvature = dislocation_curvature(&rotation)?;
    let grad_u = vector_gradient(&fields.displacement);
    let grid = fields.grid;
    let stress = Mat3Field::new(
        grid,
        grid.indices()
            .map(|idx| total_stress(grad_u.get(idx), rotation.get(idx), curvature.get(idx), p))
            .collect(),
    )?;
    Ok(matrix_div(&stress))
}

/// Same right-hand side in the expanded form
/// `(mu + mu_c) lap u + (mu + lambda - mu_c) grad div u + chi1 grad tr K
///  + chi3 Div dev sym K - 2 mu_c Div skew R`,
/// built from composed first-derivative stencils so that it agrees with
/// [`displacement_eom_rhs`] to round-off.
pub fn displacement_eom_rhs_expanded(fields: &FieldGrid3, p: &MaterialParams) -> Result<Vec3Field> {
    let grid = fields.grid;
    let rotation = fields.rotation_field();
    let curvature = dislocation_curvature(&rotation)?;
    let grad_u = vector_gradient(&fields.displacement);

    // lap u_i = d_j (grad u)_ij; row-wise divergence of the gradient.
    let laplacian = matrix_div(&grad_u);

    // Scalar helper: gradient of a pointwise scalar derived from a matrix field.
    let scalar_gradient = |values: &[f64]| -> Vec3Field {
        let mut out = Vec3Field::zeros(grid);
        for idx in grid.indices() {
            let mut v = Vec3::ZERO;
            for axis in 0..3 {
                v[axis] = grid.deriv(idx, axis, |q| values[grid.flat(q)]);
            }
            out.set(idx, v);
        }
        out
    };

    let div_u: Vec<f64> = grid.indices().map(|idx| grad_u.get(idx).trace()).collect();
    let grad_div_u = scalar_gradient(&div_u);

    let tr_k: Vec<f64> = grid
        .indices()
        .map(|idx| curvature.get(idx).trace())
        .collect();
    let grad_tr_k = scalar_gradient(&tr_k);

    let dev_sym_k = Mat3Field::new(
        grid,
        grid.indices()
            .map(|idx| curvature.get(idx).dev_sym())
            .collect(),
    )?;
    let div_dev_sym_k = matrix_div(&dev_sym_k);

    let skew_r = Mat3Field::new(
        grid,
        grid.indices()
            .map(|idx| rotation.get(idx).skew())
            .collect(),
    )?;
    let div_skew_r = matrix_div(&skew_r);

    let mut out = Vec3Field::zeros(grid);
    for idx in grid.indices() {
        let v = laplacian.get(idx) * (p.mu + p.mu_c)
            + grad_div_u.get(idx) * (p.mu + p.lambda - p.mu_c)
            + grad_tr_k.get(idx) * p.chi1
            + div_dev_sym_k.get(idx) * p.chi3
            - div_skew_r.get(idx) * (2.0 * p.mu_c);
        out.set(idx, v);
    }
    Ok(out)
}
