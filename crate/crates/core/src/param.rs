//! The twelve-parameter map between `ℝ³ × so(3) × sym(3)` and orientation
//! preserving affine transformations.
//!
//! `phi(l, x, y) = T(l) · exp(x) · exp(y)`: scale-shear first, then rotation,
//! then translation. `psi` inverts it through the polar decomposition
//! `Â = R·S` computed entirely from the closed-form logarithm and exponential,
//! without an iterative polar algorithm.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::expmap::{exp_so3, exp_sym3};
use crate::linalg3::{gram_eigenvalues, sym_eigenvalues, AntiSymMat3, Mat3, SymMat3, Vec3};
use crate::logmap::{
    consistent_log_so3_unchecked, inv_sqrt_spd_from_log, log_so3_unchecked, log_spd_half_gram,
    ROTATION_TOLERANCE,
};

/// Determinant below which [`psi_with`] flags the input as ill-conditioned.
pub const ILL_CONDITIONED_DET: f64 = 1e-6;

/// A 3D affine transformation `x ↦ Âx + l`, the top 3×4 block of a
/// homogeneous 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomAffine3 {
    pub linear: Mat3,
    pub translation: Vec3,
}

impl Default for HomAffine3 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl HomAffine3 {
    pub const IDENTITY: Self = Self {
        linear: Mat3::IDENTITY,
        translation: Vec3::ZERO,
    };

    pub const fn new(linear: Mat3, translation: Vec3) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub const fn from_translation(t: Vec3) -> Self {
        Self::new(Mat3::IDENTITY, t)
    }

    pub const fn from_linear(linear: Mat3) -> Self {
        Self::new(linear, Vec3::ZERO)
    }

    /// From the 12 entries of the 3×4 block, row-major.
    pub fn from_rows_3x4(v: [f64; 12]) -> Self {
        Self::new(
            Mat3::from_rows([[v[0], v[1], v[2]], [v[4], v[5], v[6]], [v[8], v[9], v[10]]]),
            Vec3::new(v[3], v[7], v[11]),
        )
    }

    /// The 12 entries of the 3×4 block, row-major.
    pub fn to_rows_3x4(&self) -> [f64; 12] {
        let m = &self.linear.m;
        let t = self.translation;
        [
            m[0][0], m[0][1], m[0][2], t.x, m[1][0], m[1][1], m[1][2], t.y, m[2][0], m[2][1],
            m[2][2], t.z,
        ]
    }

    /// Homogeneous 4×4 matrix, row-major.
    pub fn to_homogeneous(&self) -> [[f64; 4]; 4] {
        let r = self.to_rows_3x4();
        [
            [r[0], r[1], r[2], r[3]],
            [r[4], r[5], r[6], r[7]],
            [r[8], r[9], r[10], r[11]],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.linear.det()
    }

    #[inline]
    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        self.linear * p + self.translation
    }

    #[inline]
    pub fn transform_vector(&self, v: Vec3) -> Vec3 {
        self.linear * v
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.linear.inverse()?;
        Ok(Self::new(inv, -(inv * self.translation)))
    }

    /// Squared Frobenius norm of the 3×4 block.
    pub fn frobenius_sq(&self) -> f64 {
        self.linear.frobenius_sq() + self.translation.norm_squared()
    }

    /// `|self - other|²_F` over the 3×4 block.
    pub fn distance_sq(&self, other: &Self) -> f64 {
        (self.linear - other.linear).frobenius_sq()
            + (self.translation - other.translation).norm_squared()
    }

    pub fn is_finite(&self) -> bool {
        self.linear.is_finite() && self.translation.is_finite()
    }
}

impl Mul for HomAffine3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.linear * o.linear,
            self.linear * o.translation + self.translation,
        )
    }
}

/// A point of `ℝ³ × so(3) × sym(3)`: translation `l`, rotation logarithm `x`
/// and scale-shear logarithm `y`.
///
/// Every point is valid; there are no constraints on the 12 entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AffineParam12 {
    pub l: Vec3,
    pub x: AntiSymMat3,
    pub y: SymMat3,
}

impl AffineParam12 {
    pub const ZERO: Self = Self {
        l: Vec3::ZERO,
        x: AntiSymMat3::ZERO,
        y: SymMat3::ZERO,
    };

    pub const fn new(l: Vec3, x: AntiSymMat3, y: SymMat3) -> Self {
        Self { l, x, y }
    }

    /// `[l₁, l₂, l₃, x₄, x₅, x₆, y₇, y₈, y₉, y₁₀, y₁₁, y₁₂]`.
    pub fn to_array(&self) -> [f64; 12] {
        let y = &self.y;
        [
            self.l.x, self.l.y, self.l.z, self.x.x4, self.x.x5, self.x.x6, y.xx, y.xy, y.xz, y.yy,
            y.yz, y.zz,
        ]
    }

    pub fn from_array(v: [f64; 12]) -> Self {
        Self::new(
            Vec3::new(v[0], v[1], v[2]),
            AntiSymMat3::new(v[3], v[4], v[5]),
            SymMat3::new(v[6], v[7], v[8], v[9], v[10], v[11]),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.l * s, self.x.scale(s), self.y.scale(s))
    }

    /// Euclidean norm of the 12-vector.
    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl Add for AffineParam12 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.l + o.l, self.x + o.x, self.y + o.y)
    }
}

impl Sub for AffineParam12 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.l - o.l, self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for AffineParam12 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// The parametrisation map `(l, x, y) ↦ T(l)·exp(x)·exp(y)`.
///
/// Total on `ℝ¹²`; the result always has a positive determinant. Fails only
/// when `exp(y)` overflows.
pub fn phi(p: &AffineParam12) -> Result<HomAffine3> {
    let r = exp_so3(&p.x);
    let s = exp_sym3(&p.y)?;
    Ok(HomAffine3::new(r * s, p.l))
}

/// Polar decomposition `Â = R·S` with `R` a rotation and `S` symmetric
/// positive definite, together with `log S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub rotation: Mat3,
    pub stretch: SymMat3,
    pub log_stretch: SymMat3,
}

/// Polar factors from closed forms only: `log S = ½ log(ÂᵀÂ)`,
/// `S⁻¹ = exp(-log S)` reusing the eigenvalues of `ÂᵀÂ`, and `R = ÂS⁻¹`.
/// `S` itself is not needed by `psi`; it is `exp(log S)`.
fn polar_parts(linear: &Mat3) -> Result<(Mat3, SymMat3)> {
    let det = linear.det();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::NotOrientationPreserving { det });
    }
    let g = linear.gram();
    let eig = gram_eigenvalues(linear);
    let log_s = log_spd_half_gram(&g, &eig)?;
    let s_inv = inv_sqrt_spd_from_log(&log_s)?;
    Ok((*linear * s_inv, log_s))
}

/// Polar decomposition through the closed-form logarithm and exponential.
pub fn polar_decompose(linear: &Mat3) -> Result<Polar> {
    let (rotation, log_stretch) = polar_parts(linear)?;
    Ok(Polar {
        rotation,
        stretch: exp_sym3(&log_stretch)?,
        log_stretch,
    })
}

/// Two Newton steps of `R ← ½(R + R⁻ᵀ)`, pulling a nearly orthogonal matrix
/// onto the rotation group.
fn reorthonormalize(r: &Mat3) -> Mat3 {
    let mut r = *r;
    for _ in 0..2 {
        match r.inverse() {
            Ok(inv) => r = (r + inv.transpose()).scale(0.5),
            Err(_) => break,
        }
    }
    r
}

/// Options for [`psi_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PsiOptions {
    /// Re-orthonormalise the rotation factor before taking its logarithm.
    /// Useful for nearly singular inputs.
    pub reorthonormalize: bool,
    /// Take the rotation logarithm closest to this reference instead of the
    /// principal one.
    pub reference: Option<AntiSymMat3>,
}

/// Result of [`psi_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiOutput {
    pub param: AffineParam12,
    /// `det Â` is below [`ILL_CONDITIONED_DET`]; the round trip may lose accuracy.
    pub ill_conditioned: bool,
}

/// Local inverse of [`phi`] with explicit options.
pub fn psi_with(a: &HomAffine3, opts: &PsiOptions) -> Result<PsiOutput> {
    let (mut r, log_s) = polar_parts(&a.linear)?;
    if opts.reorthonormalize {
        r = reorthonormalize(&r);
    }
    let orthogonality = (r.gram().to_mat3() - Mat3::IDENTITY).frobenius();
    if !(orthogonality <= ROTATION_TOLERANCE) {
        return Err(Error::NotARotation {
            orthogonality,
            det: r.det(),
        });
    }
    let x = match &opts.reference {
        Some(reference) => consistent_log_so3_unchecked(&r, reference),
        None => log_so3_unchecked(&r),
    };
    Ok(PsiOutput {
        param: AffineParam12::new(a.translation, x, log_s),
        ill_conditioned: a.det() < ILL_CONDITIONED_DET,
    })
}

/// Local inverse of [`phi`] on the principal branch (rotation angle in `[0, π]`).
pub fn psi(a: &HomAffine3) -> Result<AffineParam12> {
    Ok(psi_with(a, &PsiOptions::default())?.param)
}

/// [`psi`] with the rotation logarithm chosen closest to `reference.x`, so
/// that a sequence of transforms can track rotations past `π` and `2π`.
pub fn psi_consistent(a: &HomAffine3, reference: &AffineParam12) -> Result<AffineParam12> {
    let opts = PsiOptions {
        reference: Some(reference.x),
        ..Default::default()
    };
    Ok(psi_with(a, &opts)?.param)
}

/// What the `y` factor of a class subspace may be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum YKind {
    Zero,
    Scalar,
    Full,
}

/// The transformation classes of the 3D affine hierarchy. Each class is the
/// image under [`phi`] of a linear subspace of the parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformClass {
    /// Translations.
    R3,
    /// Rotations.
    SO3,
    /// Uniform positive scalings.
    Rplus,
    /// Rigid motions.
    SE3,
    /// Rotations with uniform scale.
    COplus3,
    /// Symmetric positive definite scale-shear.
    Symplus3,
    /// Similarities with positive scale.
    Simplus3,
    /// Linear maps with positive determinant.
    GLplus3,
    /// Affine maps with positive determinant.
    Affplus3,
}

impl TransformClass {
    pub const ALL: [Self; 9] = [
        Self::R3,
        Self::SO3,
        Self::Rplus,
        Self::SE3,
        Self::COplus3,
        Self::Symplus3,
        Self::Simplus3,
        Self::GLplus3,
        Self::Affplus3,
    ];

    /// `(translation allowed, rotation allowed, scale-shear kind)`.
    fn shape(self) -> (bool, bool, YKind) {
        use TransformClass::*;
        match self {
            R3 => (true, false, YKind::Zero),
            SO3 => (false, true, YKind::Zero),
            Rplus => (false, false, YKind::Scalar),
            SE3 => (true, true, YKind::Zero),
            COplus3 => (false, true, YKind::Scalar),
            Symplus3 => (false, false, YKind::Full),
            Simplus3 => (true, true, YKind::Scalar),
            GLplus3 => (false, true, YKind::Full),
            Affplus3 => (true, true, YKind::Full),
        }
    }

    /// Whether every member of `other` is a member of `self`.
    pub fn contains(self, other: Self) -> bool {
        let (l, x, y) = self.shape();
        let (ol, ox, oy) = other.shape();
        (l || !ol) && (x || !ox) && y >= oy
    }

    /// Classes that fix the origin.
    pub fn is_linear(self) -> bool {
        !self.shape().0
    }

    pub fn name(self) -> &'static str {
        use TransformClass::*;
        match self {
            R3 => "R3",
            SO3 => "SO3",
            Rplus => "R+",
            SE3 => "SE3",
            COplus3 => "CO+3",
            Symplus3 => "Sym+3",
            Simplus3 => "Sim+3",
            GLplus3 => "GL+3",
            Affplus3 => "Aff+3",
        }
    }

    /// Orthogonal projection of `p` onto this class's parameter subspace.
    pub fn project(self, p: &AffineParam12) -> AffineParam12 {
        let (l, x, y) = self.shape();
        AffineParam12::new(
            if l { p.l } else { Vec3::ZERO },
            if x { p.x } else { AntiSymMat3::ZERO },
            match y {
                YKind::Zero => SymMat3::ZERO,
                YKind::Scalar => SymMat3::scalar(p.y.trace() / 3.0),
                YKind::Full => p.y,
            },
        )
    }

    /// Whether `p` lies within `tol` (Euclidean, in ℝ¹²) of the class subspace.
    pub fn contains_param(self, p: &AffineParam12, tol: f64) -> bool {
        (*p - self.project(p)).norm() <= tol
    }

    /// Membership test on the transformation side.
    ///
    /// Checks `det > 0`, a vanishing translation for linear classes, and the
    /// structure of the linear part: identity for translations, orthogonal
    /// for rotations, a multiple of a rotation for conformal classes, a
    /// multiple of the identity for dilations, symmetric positive definite
    /// for scale-shear. Tolerances are relative to the linear part's scale.
    pub fn contains_transform(self, a: &HomAffine3, tol: f64) -> bool {
        let m = &a.linear;
        if !(m.det() > 0.0) {
            return false;
        }
        let (l, x, y) = self.shape();
        if !l && a.translation.norm() > tol {
            return false;
        }
        let gram = m.gram().to_mat3();
        let scale2 = gram.trace() / 3.0;
        match (x, y) {
            (_, YKind::Full) if x => true,
            (_, YKind::Full) => {
                // Symmetric positive definite.
                let asym = m.antisym_part().angle() * std::f64::consts::SQRT_2;
                asym <= tol * scale2.sqrt() && sym_eigenvalues(&m.sym_part()).l3 > 0.0
            }
            (true, YKind::Zero) => (gram - Mat3::IDENTITY).frobenius() <= tol,
            (true, YKind::Scalar) => {
                (gram - Mat3::IDENTITY.scale(scale2)).frobenius() <= tol * scale2
            }
            (false, YKind::Zero) => (*m - Mat3::IDENTITY).frobenius() <= tol,
            (false, YKind::Scalar) => {
                let c = m.trace() / 3.0;
                (*m - Mat3::IDENTITY.scale(c)).frobenius() <= tol * c.abs()
            }
        }
    }
}

impl std::fmt::Display for TransformClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
