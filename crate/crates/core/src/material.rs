//! Constitutive constants of the micropolar medium.

use crate::error::{Error, Result};

/// Material constants: shear/Lamé moduli, rotational coupling modulus, the three
/// curvature moduli, the two interaction moduli, and the two inertial densities.
///
/// Fields are public so verification code can assemble deliberately degenerate or
/// term-isolated sets; call [`MaterialParams::validate`] before physical use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams {
    /// Shear modulus (> 0).
    pub mu: f64,
    /// First Lamé parameter (3*lambda + 2*mu > 0).
    pub lambda: f64,
    /// Rotational coupling modulus (>= 0).
    pub mu_c: f64,
    /// Curvature modulus weighting the trace-free symmetric part (>= 0).
    pub kappa1: f64,
    /// Curvature modulus weighting the antisymmetric part (>= 0). Drops out of the
    /// longitudinal reduced dynamics entirely.
    pub kappa2: f64,
    /// Curvature modulus weighting the trace part (>= 0).
    pub kappa3: f64,
    /// Interaction modulus coupling tr(K) to the dilatation.
    pub chi1: f64,
    /// Interaction modulus coupling the deviatoric parts.
    pub chi3: f64,
    /// Mass density (> 0).
    pub rho: f64,
    /// Rotational inertia density (> 0).
    pub rho_rot: f64,
}

impl MaterialParams {
    /// Validated constructor; see [`MaterialParams::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mu: f64,
        lambda: f64,
        mu_c: f64,
        kappa1: f64,
        kappa2: f64,
        kappa3: f64,
        chi1: f64,
        chi3: f64,
        rho: f64,
        rho_rot: f64,
    ) -> Result<Self> {
        let p = MaterialParams {
            mu,
            lambda,
            mu_c,
            kappa1,
            kappa2,
            kappa3,
            chi1,
            chi3,
            rho,
            rho_rot,
        };
        p.validate()?;
        Ok(p)
    }

    /// Admissibility: mu > 0, bulk positivity 3*lambda + 2*mu > 0, mu_c >= 0, all
    /// curvature moduli >= 0, both densities > 0, everything finite.
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.mu,
            self.lambda,
            self.mu_c,
            self.kappa1,
            self.kappa2,
            self.kappa3,
            self.chi1,
            self.chi3,
            self.rho,
            self.rho_rot,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite constant".into()));
        }
        if !(self.mu > 0.0) {
            return Err(Error::InvalidParams(format!("mu = {} must be > 0", self.mu)));
        }
        if !(3.0 * self.lambda + 2.0 * self.mu > 0.0) {
            return Err(Error::InvalidParams(format!(
                "3*lambda + 2*mu = {} must be > 0",
                3.0 * self.lambda + 2.0 * self.mu
            )));
        }
        if self.mu_c < 0.0 {
            return Err(Error::InvalidParams(format!(
                "mu_c = {} must be >= 0",
                self.mu_c
            )));
        }
        for (name, k) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa3", self.kappa3),
        ] {
            if k < 0.0 {
                return Err(Error::InvalidParams(format!("{name} = {k} must be >= 0")));
            }
        }
        if !(self.rho > 0.0) || !(self.rho_rot > 0.0) {
            return Err(Error::InvalidParams(format!(
                "densities rho = {}, rho_rot = {} must be > 0",
                self.rho, self.rho_rot
            )));
        }
        Ok(())
    }

    /// A well-conditioned sample material used as the default throughout the CLI
    /// and tests: modest coupling, hyperbolic reduced system, soliton windows at
    /// v^2 < 0.831 and 3 < v^2 < 3.002.
    pub fn reference() -> Self {
        MaterialParams {
            mu: 1.0,
            lambda: 1.0,
            mu_c: 0.5,
            kappa1: 1.0,
            kappa2: 0.7,
            kappa3: 0.25,
            chi1: 0.1,
            chi3: 0.1,
            rho: 1.0,
            rho_rot: 1.0,
        }
    }
}
