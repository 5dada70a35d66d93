//! Fixed-size vector/matrix algebra with the index conventions used throughout.
//!
//! Everything downstream leans on two conventions fixed here once:
//!
//! * the Levi-Civita symbol `eps(i,j,k)` with `eps(0,1,2) = +1`;
//! * the axial map `A_ij = eps(i,k,j) a_k`, i.e. `A x = a × x`, with matrix form
//!   `[[0,-a3,a2],[a3,0,-a1],[-a2,a1,0]]`.
//!
//! Matrices are row-major: `m[i][j]` is row `i`, column `j`, and for displacement
//! gradients row `i` holds the spatial gradient of component `u_i`.

use crate::error::{Error, Result};
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

/// Levi-Civita symbol with `eps(0,1,2) = +1` (0-based indices).
pub fn eps(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Column vector in R^3.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(self, rhs: Vec3) -> f64 {
        self.0[0] * rhs.0[0] + self.0[1] * rhs.0[1] + self.0[2] * rhs.0[2]
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn cross(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[1] * rhs.0[2] - self.0[2] * rhs.0[1],
            self.0[2] * rhs.0[0] - self.0[0] * rhs.0[2],
            self.0[0] * rhs.0[1] - self.0[1] * rhs.0[0],
        ])
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([self[0] + rhs[0], self[1] + rhs[1], self[2] + rhs[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3([self[0] - rhs[0], self[1] - rhs[1], self[2] - rhs[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self[0] * s, self[1] * s, self[2] * s])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self * -1.0
    }
}

/// 3x3 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_diag(d0: f64, d1: f64, d2: f64) -> Self {
        let mut m = Mat3::ZERO;
        m[(0, 0)] = d0;
        m[(1, 1)] = d1;
        m[(2, 2)] = d2;
        m
    }

    pub fn transpose(self) -> Mat3 {
        let mut t = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t[(i, j)] = self[(j, i)];
            }
        }
        t
    }

    pub fn trace(self) -> f64 {
        self[(0, 0)] + self[(1, 1)] + self[(2, 2)]
    }

    /// Symmetric part (M + M^T)/2.
    pub fn sym(self) -> Mat3 {
        (self + self.transpose()) * 0.5
    }

    /// Antisymmetric part (M - M^T)/2.
    pub fn skew(self) -> Mat3 {
        (self - self.transpose()) * 0.5
    }

    /// Trace-free symmetric part, sym(M) - tr(M)/3 * I.
    pub fn dev_sym(self) -> Mat3 {
        self.sym() - Mat3::IDENTITY * (self.trace() / 3.0)
    }

    /// Frobenius inner product <A, B> = A_ij B_ij.
    pub fn inner(self, rhs: Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self[(i, j)] * rhs[(i, j)];
            }
        }
        s
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(self) -> f64 {
        self.inner(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn det(self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse by cofactor expansion; errors on (near-)singular input.
    pub fn inverse(self) -> Result<Mat3> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return Err(Error::NonInvertibleDeformation { det: d });
        }
        let m = &self.0;
        let mut inv = Mat3::ZERO;
        inv[(0, 0)] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
        inv[(0, 1)] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
        inv[(0, 2)] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
        inv[(1, 0)] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
        inv[(1, 1)] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
        inv[(1, 2)] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
        inv[(2, 0)] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
        inv[(2, 1)] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
        inv[(2, 2)] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Ok(inv * (1.0 / d))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self[(i, j)] + rhs[(i, j)];
            }
        }
        out
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, rhs: Mat3) {
        *self = *self + rhs;
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self[(i, j)] - rhs[(i, j)];
            }
        }
        out
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self[(i, j)] * s;
            }
        }
        out
    }
}

impl Mul<Mat3> for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += self[(i, k)] * rhs[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        let mut out = Vec3::ZERO;
        for i in 0..3 {
            out[i] = self[(i, 0)] * v[0] + self[(i, 1)] * v[1] + self[(i, 2)] * v[2];
        }
        out
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self * -1.0
    }
}

/// Third-order tensor `T_ijk`; used for the derivative of a rotation matrix with
/// respect to its axial vector (`k` indexes the axial component).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rank3(pub [[[f64; 3]; 3]; 3]);

impl Rank3 {
    pub const ZERO: Rank3 = Rank3([[[0.0; 3]; 3]; 3]);

    /// Contract the last index with a vector: `out_ij = T_ijk v_k`.
    pub fn contract(&self, v: Vec3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self.0[i][j][0] * v[0] + self.0[i][j][1] * v[1] + self.0[i][j][2] * v[2];
            }
        }
        out
    }

    /// Fixed-last-index slice as a matrix: `out_ij = T_ijk` for given `k`.
    pub fn slice(&self, k: usize) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self.0[i][j][k];
            }
        }
        out
    }
}

impl Index<(usize, usize, usize)> for Rank3 {
    type Output = f64;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.0[i][j][k]
    }
}

impl IndexMut<(usize, usize, usize)> for Rank3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        &mut self.0[i][j][k]
    }
}

/// Orthogonal decomposition M = dev sym M + skew M + tr(M)/3 * I.
///
/// Returns `(dev_sym, skew, trace)`; the three parts are mutually orthogonal in the
/// Frobenius inner product and recompose to M exactly.
pub fn cartan_decompose(m: Mat3) -> (Mat3, Mat3, f64) {
    (m.dev_sym(), m.skew(), m.trace())
}

/// Axial vector to antisymmetric matrix: `A_ij = eps(i,k,j) a_k`, so `A x = a × x`.
pub fn axial_to_skew(a: Vec3) -> Mat3 {
    Mat3([
        [0.0, -a[2], a[1]],
        [a[2], 0.0, -a[0]],
        [-a[1], a[0], 0.0],
    ])
}

/// Inverse of [`axial_to_skew`]; errors if the matrix has a symmetric part above
/// `1e-12` relative to its magnitude.
pub fn skew_to_axial(m: Mat3) -> Result<Vec3> {
    let sym = m.sym();
    let scale = m.norm().max(1.0);
    let max_sym = sym.norm();
    if max_sym > 1e-12 * scale {
        return Err(Error::NotAntisymmetric { max_sym });
    }
    Ok(Vec3([m[(2, 1)], m[(0, 2)], m[(1, 0)]]))
}
