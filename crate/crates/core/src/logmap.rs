//! Closed-form logarithms: symmetric positive definite matrices, rotations,
//! and the branch-tracking rotation logarithm.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::expmap::{exp_sym3, sinc_guarded};
use crate::linalg3::{spd_eigenvalues, AntiSymMat3, Mat3, SymEig3, SymMat3, Vec3};
use crate::series::{horner, sum_complete_homogeneous, L2};

/// `ℒ₂` uses its Taylor series for `|x - 1|` below this value.
pub const L2_SERIES_THRESHOLD: f64 = 0.1;

/// The log coefficients use the symmetric series form once the normalised
/// spread `(λ₁ - λ₃)/λ₂` falls below this value.
pub const LOG_SPREAD_SERIES_THRESHOLD: f64 = 0.1;

/// Rotations with `π - θ` below this use the axis (eigenvector) branch.
///
/// The antisymmetric-part formula divides by `sinc θ`, which amplifies any
/// orthogonality defect of `R` by `π/(π - θ)`; the axis branch has no such
/// amplification on the upper half of the range.
pub const NEAR_PI_THRESHOLD: f64 = std::f64::consts::FRAC_PI_2;

/// Orthogonality tolerance `|RᵀR - I|_F` accepted by the rotation logarithms.
pub const ROTATION_TOLERANCE: f64 = 1e-6;

/// `ℒ₂(x) = (log x - (x - 1))/(x - 1)`, with `ℒ₂(1) = 0`.
#[inline]
pub fn ell2(x: f64) -> f64 {
    let h = x - 1.0;
    if h.abs() < L2_SERIES_THRESHOLD {
        horner(&L2, h)
    } else {
        // ln(x) rather than ln_1p(h): keeps relative precision for tiny x.
        (x.ln() - h) / h
    }
}

/// Coefficients `(b, c)` of `log(I + W) = bW + cW²` for `W` with spectrum
/// `(p, 0, q)` and `p - q` small, from the divided-difference series.
#[inline]
fn shifted_log_coeffs(p: f64, q: f64) -> (f64, f64) {
    let c = sum_complete_homogeneous(&L2[1..], p, q);
    let m_dd = sum_complete_homogeneous(&L2[2..], p, q);
    (1.0 - p * q * m_dd, c)
}

fn check_spd(eig: &SymEig3) -> Result<()> {
    if eig.l3 > 0.0 && eig.l3.is_finite() && eig.l1.is_finite() {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite(eig.l3))
    }
}

/// Closed-form `log(S)` for symmetric positive definite `S` with known
/// eigenvalues.
///
/// With `Z = S/λ₂` the spectrum of `Z` is `(λ'₁, 1, λ'₃)` and
/// `log S = (a + log λ₂)I - (a + c)Z + cZ²` where
/// `c = (ℒ₂(λ'₁) - ℒ₂(λ'₃))/(λ'₁ - λ'₃)` and
/// `a = -1 + (λ'₃ℒ₂(λ'₁) - λ'₁ℒ₂(λ'₃))/(λ'₁ - λ'₃)`.
///
/// For a nearly scalar `S` the same polynomial is expanded around the
/// identity, `log λ₂ I + b(Z - I) + c(Z - I)²`, with `b` and `c` from their
/// series. The `Z` form is kept otherwise because `Z` carries the small
/// eigenvalues with full relative precision.
pub fn log_spd_with_eig(s: &SymMat3, eig: &SymEig3) -> Result<SymMat3> {
    check_spd(eig)?;
    let SymEig3 { l1, l2, l3 } = *eig;
    let inv = 1.0 / l2;
    let (r1, r3) = (l1 * inv, l3 * inv);
    let ln2 = l2.ln();
    if r1 - r3 < LOG_SPREAD_SERIES_THRESHOLD {
        let (b, c) = shifted_log_coeffs(r1 - 1.0, r3 - 1.0);
        let w = s.scale(inv).shift(-1.0);
        let w2 = w.square();
        return Ok(SymMat3::new(
            ln2 + b * w.xx + c * w2.xx,
            b * w.xy + c * w2.xy,
            b * w.xz + c * w2.xz,
            ln2 + b * w.yy + c * w2.yy,
            b * w.yz + c * w2.yz,
            ln2 + b * w.zz + c * w2.zz,
        ));
    }
    let (lp, lq) = (ell2(r1), ell2(r3));
    let d = r1 - r3;
    let c = (lp - lq) / d;
    let a = -1.0 + (r3 * lp - r1 * lq) / d;
    let z = s.scale(inv);
    Ok(z.square().scale(c) + z.scale(-(a + c)) + SymMat3::scalar(a + ln2))
}

/// Closed-form `log(S)` for symmetric positive definite `S`.
pub fn log_spd(s: &SymMat3) -> Result<SymMat3> {
    log_spd_with_eig(s, &spd_eigenvalues(s))
}

/// `½ log(G) = log(√G)` for a Gram matrix `G = ÂᵀÂ`.
pub fn log_spd_half_gram(g: &SymMat3, eig: &SymEig3) -> Result<SymMat3> {
    Ok(log_spd_with_eig(g, eig)?.scale(0.5))
}

/// `G^{-1/2} = exp(-½ log G)` from `half_log = ½ log G`.
///
/// The eigenvalues of `-half_log` are recomputed rather than taken as
/// `-½ log λᵢ(G)`: the computed logarithm carries the rounding of `G` itself,
/// and an exponential whose eigenvalues disagree with its argument loses the
/// relative precision `S·S⁻¹ = I` needs along the small singular directions.
pub fn inv_sqrt_spd_from_log(half_log: &SymMat3) -> Result<SymMat3> {
    exp_sym3(&half_log.scale(-1.0))
}

/// `G^{-1/2}` for symmetric positive definite `G`.
pub fn inv_sqrt_spd(g: &SymMat3, eig: &SymEig3) -> Result<SymMat3> {
    let half_log = log_spd_half_gram(g, eig)?;
    inv_sqrt_spd_from_log(&half_log)
}

/// Rotation angle in `[0, π]`, from `atan2(|R - Rᵀ|/2, (tr R - 1)/2)`.
///
/// Equivalent to the principal `acos((tr R - 1)/2)` but keeps full precision
/// near both ends of the range.
#[inline]
pub fn rotation_angle(r: &Mat3) -> f64 {
    let w = r.antisym_part();
    let cos = 0.5 * (r.trace() - 1.0);
    w.angle().atan2(cos)
}

fn check_rotation(r: &Mat3) -> Result<()> {
    let orthogonality = (r.gram().to_mat3() - Mat3::IDENTITY).frobenius();
    let det = r.det();
    if orthogonality <= ROTATION_TOLERANCE && det > 0.0 {
        Ok(())
    } else {
        Err(Error::NotARotation { orthogonality, det })
    }
}

/// Unit rotation axis of a rotation by `theta` close to `π`, sign chosen from
/// the antisymmetric part.
fn near_pi_axis(r: &Mat3, theta: f64) -> Vec3 {
    // sym(R) - cos θ I = (1 - cos θ) v vᵀ for every angle.
    let b = r.sym_part().shift(-theta.cos()).to_mat3();
    let v = (0..3)
        .map(|j| b.col(j))
        .max_by(|a, c| a.norm_squared().total_cmp(&c.norm_squared()))
        .unwrap();
    let v = v * (1.0 / v.norm());
    // (R - Rᵀ)₁₃ = 2 sin θ v₂, (R - Rᵀ)₃₂ = 2 sin θ v₁, (R - Rᵀ)₂₁ = 2 sin θ v₃.
    let d = |i: usize, j: usize| r[(i, j)] - r[(j, i)];
    let sign_test = if v.y.abs() >= 1e-9 {
        v.y * d(0, 2)
    } else if v.x.abs() >= 1e-9 {
        v.x * d(2, 1)
    } else {
        v.z * d(1, 0)
    };
    if sign_test >= 0.0 {
        v
    } else {
        -v
    }
}

/// Principal logarithm of a rotation, angle in `[0, π]`.
///
/// Uses `(R - Rᵀ)/(2 sinc θ)` away from `π`, and the rotation axis
/// (eigenvector for eigenvalue one) when `π - θ` is small.
pub fn log_so3(r: &Mat3) -> Result<AntiSymMat3> {
    check_rotation(r)?;
    Ok(log_so3_unchecked(r))
}

pub(crate) fn log_so3_unchecked(r: &Mat3) -> AntiSymMat3 {
    let theta = rotation_angle(r);
    if PI - theta < NEAR_PI_THRESHOLD {
        AntiSymMat3::from_axis_vector(near_pi_axis(r, theta) * theta)
    } else {
        r.antisym_part().scale(1.0 / sinc_guarded(theta))
    }
}

/// Logarithm of `r` closest to the reference `reference`.
///
/// The principal axis and angle are aligned with the reference direction and
/// the angle is shifted by multiples of `2π` until it lies within `π` of the
/// reference angle, which lets a motion sequence accumulate turns beyond `2π`.
/// At exactly `θ = π` the reference direction is returned scaled to `π`
/// (or a fixed generator when the reference is zero).
pub fn consistent_log_so3(r: &Mat3, reference: &AntiSymMat3) -> Result<AntiSymMat3> {
    check_rotation(r)?;
    Ok(consistent_log_so3_unchecked(r, reference))
}

pub(crate) fn consistent_log_so3_unchecked(r: &Mat3, reference: &AntiSymMat3) -> AntiSymMat3 {
    let ref_angle = reference.angle();
    let mut theta = rotation_angle(r);
    if theta >= PI {
        return if ref_angle > 0.0 {
            reference.scale(PI / ref_angle)
        } else {
            AntiSymMat3::new(PI, 0.0, 0.0)
        };
    }
    // Unit generator of the principal logarithm.
    let mut axis = if theta == 0.0 {
        // The identity has no axis; borrow the reference's.
        if ref_angle == 0.0 {
            return AntiSymMat3::ZERO;
        }
        reference.scale(1.0 / ref_angle)
    } else {
        let x = log_so3_unchecked(r);
        x.scale(1.0 / x.angle())
    };
    if axis.dot(reference) < 0.0 {
        axis = -axis;
        theta = -theta;
    }
    let two_pi = 2.0 * PI;
    while ref_angle - theta > PI {
        theta += two_pi;
    }
    while theta - ref_angle > PI {
        theta -= two_pi;
    }
    axis.scale(theta)
}

/// Signed angle of a logarithm relative to a reference direction: the norm
/// of `x`, negated when `x` points away from `reference`.
pub fn signed_angle(x: &AntiSymMat3, reference: &AntiSymMat3) -> f64 {
    let a = x.angle();
    if x.dot(reference) < 0.0 {
        -a
    } else {
        a
    }
}
