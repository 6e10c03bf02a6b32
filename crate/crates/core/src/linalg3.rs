//! Fixed-size 3-vector and 3×3 matrix kernels.
//!
//! Everything here is plain `f64` value types. [`SymMat3`] and [`AntiSymMat3`]
//! store only their independent entries, so symmetry and antisymmetry hold by
//! construction. [`sym_eigenvalues`] is the analytic eigenvalue solver the
//! closed-form exponential and logarithm are built on.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub const fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    #[inline]
    pub const fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
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

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Componentwise minimum.
    pub fn min(self, o: Self) -> Self {
        Self::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    /// Componentwise maximum.
    pub fn max(self, o: Self) -> Self {
        Self::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }
}

impl Add for Vec3 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// General 3×3 matrix, row-major: `m[i][j]` is row `i`, column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const ZERO: Self = Self { m: [[0.0; 3]; 3] };
    pub const IDENTITY: Self = Self::diag(1.0, 1.0, 1.0);

    #[inline]
    pub const fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Self { m }
    }

    #[inline]
    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self {
            m: [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]],
        }
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Self::from_rows([[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]])
    }

    #[inline]
    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    #[inline]
    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self::from_rows([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    #[inline]
    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularMatrix { det });
        }
        let m = &self.m;
        let inv = 1.0 / det;
        Ok(Self::from_rows([
            [
                (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv,
                (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv,
                (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv,
            ],
            [
                (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv,
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv,
                (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv,
            ],
            [
                (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv,
                (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv,
                (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv,
            ],
        ]))
    }

    /// `AᵀA`, symmetric positive semi-definite.
    pub fn gram(&self) -> SymMat3 {
        let (c0, c1, c2) = (self.col(0), self.col(1), self.col(2));
        SymMat3::new(
            c0.dot(c0),
            c0.dot(c1),
            c0.dot(c2),
            c1.dot(c1),
            c1.dot(c2),
            c2.dot(c2),
        )
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.m.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym_part(&self) -> SymMat3 {
        let m = &self.m;
        SymMat3::new(
            m[0][0],
            0.5 * (m[0][1] + m[1][0]),
            0.5 * (m[0][2] + m[2][0]),
            m[1][1],
            0.5 * (m[1][2] + m[2][1]),
            m[2][2],
        )
    }

    /// Antisymmetric part `(A - Aᵀ)/2`.
    pub fn antisym_part(&self) -> AntiSymMat3 {
        let m = &self.m;
        AntiSymMat3::new(
            0.5 * (m[0][1] - m[1][0]),
            0.5 * (m[0][2] - m[2][0]),
            0.5 * (m[1][2] - m[2][1]),
        )
    }
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

impl Add for Mat3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] += o.m[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] -= o.m[i][j];
            }
        }
        out
    }
}

impl Mul for Mat3 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j];
            }
        }
        Self { m: out }
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        self.mul_vec(v)
    }
}

impl Mul<f64> for Mat3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Symmetric 3×3 matrix stored as its upper triangle
/// `[[xx, xy, xz], [xy, yy, yz], [xz, yz, zz]]`.
///
/// Field order matches the parameter order `y₇..y₁₂`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymMat3 {
    pub xx: f64,
    pub xy: f64,
    pub xz: f64,
    pub yy: f64,
    pub yz: f64,
    pub zz: f64,
}

impl SymMat3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0, 0.0, 1.0);

    #[inline]
    pub const fn new(xx: f64, xy: f64, xz: f64, yy: f64, yz: f64, zz: f64) -> Self {
        Self {
            xx,
            xy,
            xz,
            yy,
            yz,
            zz,
        }
    }

    #[inline]
    pub const fn diag(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, 0.0, 0.0, b, 0.0, c)
    }

    #[inline]
    pub const fn scalar(c: f64) -> Self {
        Self::diag(c, c, c)
    }

    pub const fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    pub const fn to_array(self) -> [f64; 6] {
        [self.xx, self.xy, self.xz, self.yy, self.yz, self.zz]
    }

    pub fn to_mat3(self) -> Mat3 {
        Mat3::from_rows([
            [self.xx, self.xy, self.xz],
            [self.xy, self.yy, self.yz],
            [self.xz, self.yz, self.zz],
        ])
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.xx + self.yy + self.zz
    }

    pub fn det(&self) -> f64 {
        self.xx * (self.yy * self.zz - self.yz * self.yz)
            - self.xy * (self.xy * self.zz - self.yz * self.xz)
            + self.xz * (self.xy * self.yz - self.yy * self.xz)
    }

    /// Lower triangular `L` with `LLᵀ = self`, if positive definite.
    pub fn cholesky(&self) -> Option<Mat3> {
        let l00 = self.xx.sqrt();
        let l10 = self.xy / l00;
        let l20 = self.xz / l00;
        let l11 = (self.yy - l10 * l10).sqrt();
        let l21 = (self.yz - l20 * l10) / l11;
        let l22 = (self.zz - l20 * l20 - l21 * l21).sqrt();
        let l = Mat3::from_rows([[l00, 0.0, 0.0], [l10, l11, 0.0], [l20, l21, l22]]);
        (l00 > 0.0 && l11 > 0.0 && l22 > 0.0 && l.is_finite()).then_some(l)
    }

    /// `Y²`, which is again symmetric.
    #[inline]
    pub fn square(&self) -> Self {
        let (a, b, c, d, e, f) = (self.xx, self.xy, self.xz, self.yy, self.yz, self.zz);
        Self::new(
            a * a + b * b + c * c,
            a * b + b * d + c * e,
            a * c + b * e + c * f,
            b * b + d * d + e * e,
            b * c + d * e + e * f,
            c * c + e * e + f * f,
        )
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.xx * s,
            self.xy * s,
            self.xz * s,
            self.yy * s,
            self.yz * s,
            self.zz * s,
        )
    }

    /// `Y + s·I`.
    #[inline]
    pub fn shift(&self, s: f64) -> Self {
        Self::new(
            self.xx + s,
            self.xy,
            self.xz,
            self.yy + s,
            self.yz,
            self.zz + s,
        )
    }

    /// Frobenius norm squared, counting off-diagonal entries twice.
    pub fn frobenius_sq(&self) -> f64 {
        self.xx * self.xx
            + self.yy * self.yy
            + self.zz * self.zz
            + 2.0 * (self.xy * self.xy + self.xz * self.xz + self.yz * self.yz)
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub fn is_diagonal(&self) -> bool {
        self.xy == 0.0 && self.xz == 0.0 && self.yz == 0.0
    }

    #[inline]
    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.xx * v.x + self.xy * v.y + self.xz * v.z,
            self.xy * v.x + self.yy * v.y + self.yz * v.z,
            self.xz * v.x + self.yz * v.y + self.zz * v.z,
        )
    }
}

impl Add for SymMat3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.xx + o.xx,
            self.xy + o.xy,
            self.xz + o.xz,
            self.yy + o.yy,
            self.yz + o.yz,
            self.zz + o.zz,
        )
    }
}

impl Sub for SymMat3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}

impl Neg for SymMat3 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for SymMat3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Antisymmetric 3×3 matrix `[[0, x4, x5], [-x4, 0, x6], [-x5, -x6, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AntiSymMat3 {
    pub x4: f64,
    pub x5: f64,
    pub x6: f64,
}

impl AntiSymMat3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    #[inline]
    pub const fn new(x4: f64, x5: f64, x6: f64) -> Self {
        Self { x4, x5, x6 }
    }

    /// The generator `[ω]ₓ` with `[ω]ₓ v = ω × v`.
    ///
    /// `[ω]ₓ = [[0, -ωz, ωy], [ωz, 0, -ωx], [-ωy, ωx, 0]]`, so
    /// `x4 = -ωz`, `x5 = ωy`, `x6 = -ωx`.
    #[inline]
    pub const fn from_axis_vector(w: Vec3) -> Self {
        Self::new(-w.z, w.y, -w.x)
    }

    /// Inverse of [`AntiSymMat3::from_axis_vector`]: the rotation vector `angle · axis`.
    #[inline]
    pub const fn axis_vector(&self) -> Vec3 {
        Vec3::new(-self.x6, self.x5, -self.x4)
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.x4, self.x5, self.x6]
    }

    pub fn to_mat3(self) -> Mat3 {
        Mat3::from_rows([
            [0.0, self.x4, self.x5],
            [-self.x4, 0.0, self.x6],
            [-self.x5, -self.x6, 0.0],
        ])
    }

    /// `√(tr(XᵀX)/2)`, the rotation angle of `exp(X)` (before reduction).
    #[inline]
    pub fn angle(&self) -> f64 {
        (self.x4 * self.x4 + self.x5 * self.x5 + self.x6 * self.x6).sqrt()
    }

    /// `X²`, which is symmetric.
    #[inline]
    pub fn square(&self) -> SymMat3 {
        let (a, b, c) = (self.x4, self.x5, self.x6);
        SymMat3::new(
            -a * a - b * b,
            -b * c,
            a * c,
            -a * a - c * c,
            -a * b,
            -b * b - c * c,
        )
    }

    /// Off-diagonal inner product `X₁₂X'₁₂ + X₁₃X'₁₃ + X₂₃X'₂₃`.
    #[inline]
    pub fn dot(&self, o: &Self) -> f64 {
        self.x4 * o.x4 + self.x5 * o.x5 + self.x6 * o.x6
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x4 * s, self.x5 * s, self.x6 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.x4.is_finite() && self.x5.is_finite() && self.x6.is_finite()
    }
}

impl Add for AntiSymMat3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x4 + o.x4, self.x5 + o.x5, self.x6 + o.x6)
    }
}

impl Sub for AntiSymMat3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x4 - o.x4, self.x5 - o.x5, self.x6 - o.x6)
    }
}

impl Neg for AntiSymMat3 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for AntiSymMat3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<SymMat3> for Mat3 {
    type Output = Mat3;
    #[inline]
    fn mul(self, s: SymMat3) -> Mat3 {
        self * s.to_mat3()
    }
}

/// Eigenvalues of a symmetric 3×3 matrix, sorted `l1 ≥ l2 ≥ l3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEig3 {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl SymEig3 {
    /// Sorts three values into descending order.
    pub fn from_unsorted(mut v: [f64; 3]) -> Self {
        v.sort_by(|a, b| b.total_cmp(a));
        Self {
            l1: v[0],
            l2: v[1],
            l3: v[2],
        }
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }

    /// Applies a monotone map; `decreasing` flips the order so the result stays sorted.
    pub fn map(self, f: impl Fn(f64) -> f64, decreasing: bool) -> Self {
        if decreasing {
            Self {
                l1: f(self.l3),
                l2: f(self.l2),
                l3: f(self.l1),
            }
        } else {
            Self {
                l1: f(self.l1),
                l2: f(self.l2),
                l3: f(self.l3),
            }
        }
    }
}

/// Eigenvalues of a real symmetric matrix by the trigonometric solution of
/// its characteristic cubic.
///
/// The matrix is shifted by `tr(Y)/3` and scaled to unit deviation, which
/// turns the characteristic polynomial into `t³ - 3t - 2r` with `|r| ≤ 1`;
/// its roots are `2cos((acos r + 2πk)/3)`. Diagonal input bypasses the cubic
/// and is returned exactly.
pub fn sym_eigenvalues(y: &SymMat3) -> SymEig3 {
    if y.is_diagonal() {
        return SymEig3::from_unsorted([y.xx, y.yy, y.zz]);
    }
    let q = y.trace() / 3.0;
    let b = y.shift(-q);
    let off = y.xy * y.xy + y.xz * y.xz + y.yz * y.yz;
    let p2 = b.xx * b.xx + b.yy * b.yy + b.zz * b.zz + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return SymEig3 {
            l1: q,
            l2: q,
            l3: q,
        };
    }
    let r = (b.det() / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    // l2 from the trace, clamped so roundoff cannot break the ordering.
    let l2 = (3.0 * q - l1 - l3).clamp(l3, l1);
    SymEig3 { l1, l2, l3 }
}


/// Eigenvalues of the Gram matrix `AᵀA`, for `A` with positive determinant.
///
/// Forming `AᵀA` squares the condition number, so the trailing eigenvalues
/// from [`sym_eigenvalues`] can lose most of their relative precision. The
/// invariants `tr = |A|²_F`, `σ₂ = |cof A|²_F` and `det = (det A)²` are taken
/// from `A` itself: the leading eigenvalue comes from the cubic, and the
/// other two are the roots of the quadratic whose sum and product follow
/// from the invariants.
pub fn gram_eigenvalues(a: &Mat3) -> SymEig3 {
    let g = a.gram();
    let eig = sym_eigenvalues(&g);
    let det = a.det();
    if !(eig.l1 > 0.0 && det > 0.0) {
        return eig;
    }
    let (c0, c1, c2) = (a.col(0), a.col(1), a.col(2));
    let sigma2 =
        c0.cross(c1).norm_squared() + c1.cross(c2).norm_squared() + c2.cross(c0).norm_squared();
    let l1 = eig.l1;
    let prod = det * det / l1;
    let sum = (sigma2 - prod) / l1;
    // Larger root of t² - sum·t + prod without cancellation, then the
    // smaller one from the product.
    let disc = (sum * sum - 4.0 * prod).max(0.0);
    let l2 = (0.5 * (sum + disc.sqrt())).max(prod.sqrt());
    SymEig3::from_unsorted([l1, l2, prod / l2])
}

/// Eigenvalues of a symmetric positive definite matrix, with the small ones
/// to full relative precision where the Cholesky factor allows it.
///
/// `S = LLᵀ` is the Gram matrix of `Lᵀ`, so [`gram_eigenvalues`] applies.
/// Falls back to [`sym_eigenvalues`] when `S` is not positive definite.
pub fn spd_eigenvalues(s: &SymMat3) -> SymEig3 {
    if s.is_diagonal() {
        return sym_eigenvalues(s);
    }
    match s.cholesky() {
        Some(l) => gram_eigenvalues(&l.transpose()),
        None => sym_eigenvalues(s),
    }
}

/// `det(xI - Y)`.
pub fn char_poly(y: &SymMat3, x: f64) -> f64 {
    -y.shift(-x).det()
}
