//! Fixed-size 3-vector and 3×3 matrix arithmetic, symmetric eigendecomposition
//! and rotation utilities.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub const fn splat(v: f64) -> Self {
        Vec3 { x: v, y: v, z: v }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Unit vector along Cartesian axis `i` (0, 1 or 2).
    pub fn axis(i: usize) -> Self {
        let mut v = Vec3::ZERO;
        v[i] = 1.0;
        v
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn component_mul(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x * o.x, self.y * o.y, self.z * o.z)
    }

    pub fn min(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn max_element(self) -> f64 {
        self.x.max(self.y).max(self.z)
    }

    /// Outer product `self ⊗ o`.
    pub fn outer(self, o: Vec3) -> Mat3 {
        Mat3::from_rows([
            [self.x * o.x, self.x * o.y, self.x * o.z],
            [self.y * o.x, self.y * o.y, self.y * o.z],
            [self.z * o.x, self.z * o.y, self.z * o.z],
        ])
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl IndexMut<usize> for Vec3 {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        self.x += o.x;
        self.y += o.y;
        self.z += o.z;
    }
}

impl SubAssign for Vec3 {
    #[inline]
    fn sub_assign(&mut self, o: Vec3) {
        self.x -= o.x;
        self.y -= o.y;
        self.z -= o.z;
    }
}

impl MulAssign<f64> for Vec3 {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        self.x *= s;
        self.y *= s;
        self.z *= s;
    }
}

impl std::iter::Sum for Vec3 {
    fn sum<I: Iterator<Item = Vec3>>(iter: I) -> Vec3 {
        iter.fold(Vec3::ZERO, |a, b| a + b)
    }
}

/// Row-major 3×3 matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };
    pub const ZERO: Mat3 = Mat3 { m: [[0.0; 3]; 3] };

    pub const fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3::from_rows([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    pub fn diag(d: Vec3) -> Self {
        Mat3::from_rows([[d.x, 0.0, 0.0], [0.0, d.y, 0.0], [0.0, 0.0, d.z]])
    }

    pub fn scalar(s: f64) -> Self {
        Mat3::diag(Vec3::splat(s))
    }

    #[inline]
    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    #[inline]
    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.m[i])
    }

    pub fn diagonal(&self) -> Vec3 {
        Vec3::new(self.m[0][0], self.m[1][1], self.m[2][2])
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.m;
        Mat3::from_rows([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    /// Largest absolute difference between mirrored off-diagonal entries.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.m;
        (m[0][1] - m[1][0])
            .abs()
            .max((m[0][2] - m[2][0]).abs())
            .max((m[1][2] - m[2][1]).abs())
    }

    /// Root-sum-square of the off-diagonal entries.
    pub fn off_diagonal_norm(&self) -> f64 {
        let m = &self.m;
        (m[0][1] * m[0][1]
            + m[1][0] * m[1][0]
            + m[0][2] * m[0][2]
            + m[2][0] * m[2][0]
            + m[1][2] * m[1][2]
            + m[2][1] * m[2][1])
            .sqrt()
    }

    pub fn symmetrized(&self) -> Mat3 {
        (*self + self.transpose()) * 0.5
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let m = &self.m;
        let inv_det = 1.0 / det;
        Some(Mat3::from_rows([
            [
                (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv_det,
                (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_det,
                (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_det,
            ],
            [
                (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv_det,
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_det,
                (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_det,
            ],
            [
                (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv_det,
                (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_det,
                (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_det,
            ],
        ]))
    }

    /// Solves `self · x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: Vec3) -> Option<Vec3> {
        let mut a = self.m;
        let mut r = b.to_array();
        let scale = self.norm();
        if !(scale > 0.0) || !scale.is_finite() {
            return None;
        }
        for k in 0..3 {
            let p = (k..3)
                .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
                .unwrap();
            if a[p][k].abs() <= 1e-14 * scale {
                return None;
            }
            a.swap(k, p);
            r.swap(k, p);
            for i in (k + 1)..3 {
                let f = a[i][k] / a[k][k];
                for j in k..3 {
                    a[i][j] -= f * a[k][j];
                }
                r[i] -= f * r[k];
            }
        }
        let mut x = [0.0; 3];
        for i in (0..3).rev() {
            let s: f64 = ((i + 1)..3).map(|j| a[i][j] * x[j]).sum();
            x[i] = (r[i] - s) / a[i][i];
        }
        Some(Vec3::from_array(x))
    }

    /// Re-orthonormalizes the columns with classical Gram–Schmidt, keeping
    /// the first column's direction. The third column is rebuilt as the cross
    /// product so the result is a proper rotation.
    pub fn orthonormalized(&self) -> Mat3 {
        let c0 = self.col(0).normalized().unwrap_or(Vec3::X);
        let c1 = self.col(1) - c0 * c0.dot(self.col(1));
        let c1 = c1.normalized().unwrap_or_else(|| any_perpendicular(c0));
        let c2 = c0.cross(c1);
        Mat3::from_cols(c0, c1, c2)
    }

    /// Largest entry of `QᵀQ − 1`.
    pub fn orthonormality_error(&self) -> f64 {
        let p = self.transpose() * *self - Mat3::IDENTITY;
        p.m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

fn any_perpendicular(v: Vec3) -> Vec3 {
    let trial = if v.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    v.cross(trial).normalized().unwrap_or(Vec3::Z)
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.m[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.m[i][j]
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    #[inline]
    fn mul(self, o: Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j];
            }
        }
        Mat3::from_rows(r)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        let mut r = self;
        r.m.iter_mut().flatten().for_each(|v| *v *= s);
        r
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut r = self;
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] += o.m[i][j];
            }
        }
        r
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o * -1.0
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        *self = *self + o;
    }
}

/// Eigen-decomposition of a symmetric 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenResult {
    /// Sorted descending.
    pub eigenvalues: Vec3,
    /// Orthonormal right-handed eigenvectors; `axes[i]` pairs with `eigenvalues[i]`.
    pub axes: [Vec3; 3],
}

impl EigenResult {
    /// Matrix whose columns are the eigen-axes.
    pub fn axes_matrix(&self) -> Mat3 {
        Mat3::from_cols(self.axes[0], self.axes[1], self.axes[2])
    }
}

const JACOBI_TOLERANCE: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 50;

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Eigenvalues come back in descending order with the eigenvectors forming a
/// right-handed orthonormal basis; if the sorted basis is left-handed the
/// third axis is negated.
pub fn eig_sym3(m: &Mat3) -> Result<EigenResult> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let scale = m.norm();
    if m.asymmetry() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (asymmetry {:.3e})",
            m.asymmetry()
        )));
    }
    let mut a = m.symmetrized();
    let mut v = Mat3::IDENTITY;
    let threshold = JACOBI_TOLERANCE * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a.m[p][q];
            if apq == 0.0 {
                continue;
            }
            // Rotation angle zeroing a[p][q]; see Golub & Van Loan, Alg. 8.4.1.
            let tau = (a.m[q][q] - a.m[p][p]) / (2.0 * apq);
            let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            let mut rot = Mat3::IDENTITY;
            rot.m[p][p] = c;
            rot.m[q][q] = c;
            rot.m[p][q] = s;
            rot.m[q][p] = -s;
            a = rot.transpose() * a * rot;
            a.m[p][q] = 0.0;
            a.m[q][p] = 0.0;
            v = v * rot;
        }
    }

    let mut order = [0usize, 1, 2];
    let d = a.diagonal();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let eigenvalues = Vec3::new(d[order[0]], d[order[1]], d[order[2]]);
    let mut axes = [v.col(order[0]), v.col(order[1]), v.col(order[2])];
    for ax in axes.iter_mut() {
        *ax = ax.normalized().unwrap_or(*ax);
    }
    if axes[0].cross(axes[1]).dot(axes[2]) < 0.0 {
        axes[2] = -axes[2];
    }
    Ok(EigenResult { eigenvalues, axes })
}

/// Rotation matrix with entries `Q_ab = n_a · e_b`, i.e. the eigen-axes as
/// columns. `Qᵀ` maps each `e_i` onto the global orth `n_i`.
pub fn rotation_from_axes(e1: Vec3, e2: Vec3, e3: Vec3) -> Result<Mat3> {
    let q = Mat3::from_cols(e1, e2, e3);
    if !q.is_finite() || q.orthonormality_error() > 1e-10 {
        return Err(Error::InvalidInput("axes are not orthonormal".into()));
    }
    if q.determinant() < 0.0 {
        return Err(Error::InvalidInput("axes form a left-handed basis".into()));
    }
    Ok(q)
}

/// Rodrigues rotation about `axis` by `angle` radians. The axis is
/// normalised; a zero axis gives the identity.
pub fn axis_angle(axis: Vec3, angle: f64) -> Mat3 {
    let Some(k) = axis.normalized() else { return Mat3::IDENTITY };
    let (s, c) = angle.sin_cos();
    let kx = Mat3::from_rows([[0.0, -k.z, k.y], [k.z, 0.0, -k.x], [-k.y, k.x, 0.0]]);
    Mat3::IDENTITY + kx * s + (kx * kx) * (1.0 - c)
}

/// Advances orientation `q` by the exponential map of `omega · dt` (world
/// frame angular velocity), then re-orthonormalizes.
pub fn rotate_increment(q: &Mat3, omega: Vec3, dt: f64) -> Mat3 {
    let rate = omega.norm();
    if rate == 0.0 || dt == 0.0 {
        return *q;
    }
    (axis_angle(omega / rate, rate * dt) * *q).orthonormalized()
}
