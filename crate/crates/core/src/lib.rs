//! Geometrically nonlinear Cosserat (micropolar) elasticity in one dependency-free
//! core crate.
//!
//! The model couples a displacement field `u` with an independent microrotation
//! field `R = exp(A)`, `A` antisymmetric with axial vector `a`. The crate provides:
//!
//! * [`algebra`], [`rotation`], [`grid`] — the kinematic layer: fixed index
//!   conventions, the rotation exponential and its exact axial derivative, polar
//!   decomposition, and the stencil matrix calculus (row-wise Curl/Div, dislocation
//!   curvature `K = R^T Curl R`);
//! * [`energy`] — elastic, curvature, interaction, and rotational-coupling energy
//!   densities, their volume integrals, and the displacement equation of motion in
//!   two algebraically equivalent discrete forms;
//! * [`reduced`] — the longitudinal ansatz `u = (0,0,psi(z,t))`, rotation about `z`
//!   by `phi(z,t)`: the 2x2 wave-operator matrix, dispersion relation, closed-form
//!   sine-Gordon kink/antikink solutions, reduced right-hand side and conserved
//!   energy;
//! * [`dynamics`] — explicit velocity-Verlet integration of the reduced system with
//!   CFL control, Dirichlet/periodic boundaries, and error diagnostics;
//! * [`verify`] — self-contained numerical checks (finite-difference oracles,
//!   refinement slopes, closed-form residuals) emitted as machine-readable reports.

pub mod algebra;
pub mod dynamics;
pub mod energy;
pub mod error;
pub mod grid;
pub mod material;
pub mod reduced;
pub mod rotation;
pub mod verify;

pub use algebra::{axial_to_skew, cartan_decompose, skew_to_axial, Mat3, Rank3, Vec3};
pub use dynamics::{
    cfl_limit, init_from_soliton, integrate, l2_error, soliton_center, step, DiagnosticsRow,
    InitialCondition, ReducedState, SimConfig, SimOutput,
};
pub use energy::{
    displacement_eom_rhs, displacement_eom_rhs_expanded, kinetic_density, total_energy,
    v_coupling_full, v_coupling_model2, v_curvature, v_elastic, v_elastic_linear, v_interaction,
    FieldGrid3, Integrand, PotentialForm,
};
pub use error::{Error, Result};
pub use grid::{dislocation_curvature, matrix_curl, matrix_div, Grid3, Mat3Field, Vec3Field};
pub use material::MaterialParams;
pub use reduced::{
    admissible_windows, coupling_matrix, dispersion_residual, hyperbolicity_check, reduced_energy,
    reduced_rhs, rescale_z, solve_velocity, wave_number, BoundaryMode, Branch, CouplingMatrix,
    ReducedParams, SolitonSolution,
};
pub use rotation::{polar_decompose, rotation_exp, rotation_variation};
pub use verify::{
    check_ansatz_reduction, check_displacement_eom, check_linearization_chain,
    check_rotation_variation, check_soliton_residual, run_all, CheckReport,
};
