//! Uniform 3D grids, sampled vector/matrix fields, and the second-order stencil
//! calculus on them: gradients, the row-wise matrix curl and divergence, and the
//! dislocation curvature tensor of a rotation field.
//!
//! Conventions (matching [`crate::algebra`]):
//!
//! * `(grad u)_ij = d u_i / d x_j` — row `i` is the gradient of component `i`;
//! * `(Curl M)_ij = d_k M_il eps(k,l,j)` — the classical curl applied to each row;
//! * `(Div M)_i  = d_j M_ij` — the divergence of each row.
//!
//! Interior derivatives use central differences; edges use one-sided three-point
//! stencils. Both are exact on polynomials of degree <= 2.

use crate::algebra::{Mat3, Vec3};
use crate::error::{Error, Result};

/// Minimum points per axis: wide (composed) second derivatives reach two cells out.
pub const MIN_POINTS_PER_AXIS: usize = 5;

/// A uniform rectilinear grid: per-axis point counts, spacings, and origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid3 {
    counts: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
}

impl Grid3 {
    pub fn new(counts: [usize; 3], spacing: [f64; 3], origin: [f64; 3]) -> Result<Self> {
        for axis in 0..3 {
            if counts[axis] < MIN_POINTS_PER_AXIS {
                return Err(Error::GridTooSmall {
                    axis,
                    count: counts[axis],
                    min: MIN_POINTS_PER_AXIS,
                });
            }
            if !(spacing[axis] > 0.0) || !spacing[axis].is_finite() || !origin[axis].is_finite() {
                return Err(Error::InvalidState(format!(
                    "grid axis {axis}: spacing {} origin {}",
                    spacing[axis], origin[axis]
                )));
            }
        }
        Ok(Grid3 {
            counts,
            spacing,
            origin,
        })
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.counts[0] * self.counts[1] * self.counts[2]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat storage index of a grid point.
    pub fn flat(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.counts[1] + idx[1]) * self.counts[2] + idx[2]
    }

    /// Physical coordinates of a grid point.
    pub fn position(&self, idx: [usize; 3]) -> [f64; 3] {
        [
            self.origin[0] + idx[0] as f64 * self.spacing[0],
            self.origin[1] + idx[1] as f64 * self.spacing[1],
            self.origin[2] + idx[2] as f64 * self.spacing[2],
        ]
    }

    /// Iterate all grid indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = [usize; 3]> {
        let [nx, ny, nz] = self.counts;
        (0..nx).flat_map(move |i| (0..ny).flat_map(move |j| (0..nz).map(move |k| [i, j, k])))
    }

    /// Trapezoid quadrature weight of a point (product of per-axis end halving),
    /// including the volume element.
    pub fn quad_weight(&self, idx: [usize; 3]) -> f64 {
        let mut w = self.spacing[0] * self.spacing[1] * self.spacing[2];
        for axis in 0..3 {
            if idx[axis] == 0 || idx[axis] == self.counts[axis] - 1 {
                w *= 0.5;
            }
        }
        w
    }

    /// Second-order first derivative along `axis` of the scalar samples provided by
    /// `get`, evaluated at `idx`. Central in the interior, one-sided at the edges.
    pub fn deriv(&self, idx: [usize; 3], axis: usize, get: impl Fn([usize; 3]) -> f64) -> f64 {
        let n = self.counts[axis];
        let h = self.spacing[axis];
        let at = |pos: usize| {
            let mut shifted = idx;
            shifted[axis] = pos;
            get(shifted)
        };
        let i = idx[axis];
        if i == 0 {
            (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
        } else if i == n - 1 {
            (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h)
        } else {
            (at(i + 1) - at(i - 1)) / (2.0 * h)
        }
    }
}

/// A [`Vec3`]-valued field sampled on a [`Grid3`].
#[derive(Clone, Debug)]
pub struct Vec3Field {
    grid: Grid3,
    data: Vec<Vec3>,
}

impl Vec3Field {
    pub fn new(grid: Grid3, data: Vec<Vec3>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::FieldSizeMismatch {
                len: data.len(),
                expected: grid.len(),
            });
        }
        Ok(Vec3Field { grid, data })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Vec3Field {
            data: vec![Vec3::ZERO; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid3, f: impl Fn([f64; 3]) -> Vec3) -> Self {
        let data = grid.indices().map(|idx| f(grid.position(idx))).collect();
        Vec3Field { grid, data }
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn get(&self, idx: [usize; 3]) -> Vec3 {
        self.data[self.grid.flat(idx)]
    }

    pub fn set(&mut self, idx: [usize; 3], v: Vec3) {
        let flat = self.grid.flat(idx);
        self.data[flat] = v;
    }

    pub fn data(&self) -> &[Vec3] {
        &self.data
    }
}

/// A [`Mat3`]-valued field sampled on a [`Grid3`].
#[derive(Clone, Debug)]
pub struct Mat3Field {
    grid: Grid3,
    data: Vec<Mat3>,
}

impl Mat3Field {
    pub fn new(grid: Grid3, data: Vec<Mat3>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::FieldSizeMismatch {
                len: data.len(),
                expected: grid.len(),
            });
        }
        Ok(Mat3Field { grid, data })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Mat3Field {
            data: vec![Mat3::ZERO; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid3, f: impl Fn([f64; 3]) -> Mat3) -> Self {
        let data = grid.indices().map(|idx| f(grid.position(idx))).collect();
        Mat3Field { grid, data }
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn get(&self, idx: [usize; 3]) -> Mat3 {
        self.data[self.grid.flat(idx)]
    }

    pub fn set(&mut self, idx: [usize; 3], m: Mat3) {
        let flat = self.grid.flat(idx);
        self.data[flat] = m;
    }

    pub fn data(&self) -> &[Mat3] {
        &self.data
    }
}

/// Displacement gradient field: `(grad u)_ij = d u_i / d x_j` by stencils.
pub fn vector_gradient(u: &Vec3Field) -> Mat3Field {
    let grid = *u.grid();
    let mut out = Mat3Field::zeros(grid);
    for idx in grid.indices() {
        let mut g = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                g[(i, j)] = grid.deriv(idx, j, |p| u.get(p)[i]);
            }
        }
        out.set(idx, g);
    }
    out
}

/// Row-wise curl of a matrix field: `(Curl M)_ij = d_k M_il eps(k,l,j)`.
pub fn matrix_curl(m: &Mat3Field) -> Mat3Field {
    let grid = *m.grid();
    let mut out = Mat3Field::zeros(grid);
    for idx in grid.indices() {
        let mut c = Mat3::ZERO;
        for i in 0..3 {
            // Row i treated as a vector field v_l = M_il; classical curl:
            // (curl v)_0 = d_1 v_2 - d_2 v_1, cyclically.
            c[(i, 0)] = grid.deriv(idx, 1, |p| m.get(p)[(i, 2)])
                - grid.deriv(idx, 2, |p| m.get(p)[(i, 1)]);
            c[(i, 1)] = grid.deriv(idx, 2, |p| m.get(p)[(i, 0)])
                - grid.deriv(idx, 0, |p| m.get(p)[(i, 2)]);
            c[(i, 2)] = grid.deriv(idx, 0, |p| m.get(p)[(i, 1)])
                - grid.deriv(idx, 1, |p| m.get(p)[(i, 0)]);
        }
        out.set(idx, c);
    }
    out
}

/// Row-wise divergence of a matrix field: `(Div M)_i = d_j M_ij`.
pub fn matrix_div(m: &Mat3Field) -> Vec3Field {
    let grid = *m.grid();
    let mut out = Vec3Field::zeros(grid);
    for idx in grid.indices() {
        let mut v = Vec3::ZERO;
        for i in 0..3 {
            v[i] = grid.deriv(idx, 0, |p| m.get(p)[(i, 0)])
                + grid.deriv(idx, 1, |p| m.get(p)[(i, 1)])
                + grid.deriv(idx, 2, |p| m.get(p)[(i, 2)]);
        }
        out.set(idx, v);
    }
    out
}

/// Orthogonality tolerance for rotation-field samples fed to
/// [`dislocation_curvature`].
const ROTATION_SAMPLE_TOL: f64 = 1e-8;

/// Dislocation curvature tensor `K = R^T Curl R` of a rotation field.
///
/// Every sample must be orthogonal to within `1e-8`; a contaminated field is
/// rejected rather than silently producing a meaningless tensor.
pub fn dislocation_curvature(rot: &Mat3Field) -> Result<Mat3Field> {
    for m in rot.data() {
        let defect = (m.transpose() * *m - Mat3::IDENTITY).norm();
        if defect > ROTATION_SAMPLE_TOL {
            return Err(Error::NotOrthogonal { defect });
        }
    }
    let curl = matrix_curl(rot);
    let grid = *rot.grid();
    let mut out = Mat3Field::zeros(grid);
    for idx in grid.indices() {
        out.set(idx, rot.get(idx).transpose() * curl.get(idx));
    }
    Ok(out)
}
