//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by kinematic operators, material validation, and time integration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix expected to be antisymmetric was not (within tolerance).
    #[error("matrix is not antisymmetric: max symmetric part {max_sym:.3e}")]
    NotAntisymmetric { max_sym: f64 },

    /// A matrix expected to be a rotation was not orthogonal (within tolerance).
    #[error("matrix is not a rotation: ||R^T R - I|| = {defect:.3e}")]
    NotOrthogonal { defect: f64 },

    /// Polar decomposition requires det F > 0.
    #[error("deformation gradient is singular or orientation-reversing (det = {det:.6e})")]
    NonInvertibleDeformation { det: f64 },

    /// The orthogonalizing fixed-point iteration did not reach tolerance.
    #[error("polar decomposition did not converge within {iterations} iterations")]
    PolarNoConvergence { iterations: usize },

    /// Grids must carry at least 5 points per axis for the stencils used here.
    #[error("grid too small: axis {axis} has {count} points, need at least {min}")]
    GridTooSmall { axis: usize, count: usize, min: usize },

    /// Field data length does not match its grid.
    #[error("field has {len} samples but grid expects {expected}")]
    FieldSizeMismatch { len: usize, expected: usize },

    /// Material parameters violate an admissibility condition.
    #[error("invalid material parameters: {0}")]
    InvalidParams(String),

    /// The reduced wave-operator matrix is not hyperbolic.
    #[error("coupling matrix is not hyperbolic: eigenvalues {eig_min:.6e}, {eig_max:.6e}")]
    NotHyperbolic { eig_min: f64, eig_max: f64 },

    /// Requested traveling speed admits no soliton (negative squared wave number).
    #[error(
        "no soliton at speed {speed}: k^2 = {k_squared:.6e} < 0; admissible speed windows {windows:?}"
    )]
    NoSolitonAtSpeed {
        speed: f64,
        k_squared: f64,
        windows: Vec<(f64, f64)>,
    },

    /// The dispersion relation degenerates (denominator vanishes at this speed).
    #[error("dispersion relation degenerate at speed {speed}: v^4 - tr(M) v^2 + det(M) = 0")]
    DegenerateDispersion { speed: f64 },

    /// The effective squared wave speed is not positive, so no rescaling exists.
    #[error("effective squared wave speed {value:.6e} is not positive at speed {speed}")]
    NonPositiveWaveSpeed { speed: f64, value: f64 },

    /// Time step exceeds the CFL stability limit.
    #[error("time step {dt:.6e} exceeds CFL limit {limit:.6e}")]
    CflViolation { dt: f64, limit: f64 },

    /// Field values exploded or became non-finite during integration.
    #[error("solution blew up at t = {t:.6e} (max |field| = {max_abs:.3e})")]
    BlowUp { t: f64, max_abs: f64 },

    /// Simulation state is internally inconsistent.
    #[error("invalid state: {0}")]
    InvalidState(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
