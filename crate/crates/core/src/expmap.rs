//! Closed-form exponentials of antisymmetric and symmetric 3×3 matrices.
//!
//! The rotation part uses Rodrigues' formula. The symmetric part divides the
//! exponential series by the characteristic polynomial (Cayley–Hamilton), so
//! `exp(Y) = e^{λ₂}(I + bZ + cZ²)` with `Z = Y - λ₂I` and coefficients that
//! only depend on the eigenvalues, which come from the analytic cubic solver.

use crate::error::{Error, Result};
use crate::linalg3::{sym_eigenvalues, AntiSymMat3, Mat3, SymEig3, SymMat3};
use crate::series::{horner, sum_complete_homogeneous, E2};

/// Below this angle `sinc` switches to `1 - θ²/6`.
pub const SINC_THRESHOLD: f64 = 1e-4;

/// `e₂` uses its Taylor series for `|x|` below this value.
pub const E2_SERIES_THRESHOLD: f64 = 1.0;

/// The `b`, `c` coefficients use the symmetric series form once the shifted
/// spectrum spread `λ₁ - λ₃` falls below this value.
pub const SPREAD_SERIES_THRESHOLD: f64 = 1.0;

/// `sin(θ)/θ`, with the second-order expansion near zero.
#[inline]
pub fn sinc_guarded(theta: f64) -> f64 {
    if theta.abs() < SINC_THRESHOLD {
        1.0 - theta * theta / 6.0
    } else {
        theta.sin() / theta
    }
}

/// `e₂(x) = (eˣ - 1 - x)/x²`, with `e₂(0) = 1/2`.
#[inline]
pub fn e2(x: f64) -> f64 {
    if x.abs() < E2_SERIES_THRESHOLD {
        horner(&E2, x)
    } else {
        (x.exp_m1() - x) / (x * x)
    }
}

/// Rodrigues' formula `I + sinc(θ)X + ½ sinc(θ/2)² X²`.
pub fn exp_so3(x: &AntiSymMat3) -> Mat3 {
    let theta = x.angle();
    let s = sinc_guarded(theta);
    let h = sinc_guarded(0.5 * theta);
    let c = 0.5 * h * h;
    let x2 = x.square();
    Mat3::from_rows([
        [1.0 + c * x2.xx, s * x.x4 + c * x2.xy, s * x.x5 + c * x2.xz],
        [-s * x.x4 + c * x2.xy, 1.0 + c * x2.yy, s * x.x6 + c * x2.yz],
        [-s * x.x5 + c * x2.xz, -s * x.x6 + c * x2.yz, 1.0 + c * x2.zz],
    ])
}

/// Coefficients `(b, c)` of `exp(Z) = I + bZ + cZ²` for a symmetric `Z` with
/// spectrum `(p, 0, q)`, `p ≥ 0 ≥ q`.
///
/// `c` is the second divided difference of `exp` at `(p, 0, q)` and
/// `b = 1 - pq·e₂[p, q]`. Close nodes go through the homogeneous-polynomial
/// series, which has no cancellation.
#[inline]
pub(crate) fn shifted_exp_coeffs(p: f64, q: f64) -> (f64, f64) {
    if p - q < SPREAD_SERIES_THRESHOLD {
        let c = sum_complete_homogeneous(&E2, p, q);
        let e2_dd = sum_complete_homogeneous(&E2[1..], p, q);
        (1.0 - p * q * e2_dd, c)
    } else {
        let (ep, eq) = (e2(p), e2(q));
        let d = p - q;
        let b = 1.0 - p * q * (ep - eq) / d;
        let c = (p * ep - q * eq) / d;
        (b, c)
    }
}

/// Closed-form `exp(Y)` for symmetric `Y`; the result is symmetric positive
/// definite.
pub fn exp_sym3(y: &SymMat3) -> Result<SymMat3> {
    exp_sym3_with_eig(y, &sym_eigenvalues(y))
}

/// [`exp_sym3`] with precomputed eigenvalues of `y`.
pub fn exp_sym3_with_eig(y: &SymMat3, eig: &SymEig3) -> Result<SymMat3> {
    let SymEig3 { l1, l2, l3 } = *eig;
    if l1 > f64::MAX.ln() {
        return Err(Error::Overflow(l1));
    }
    let (b, c) = shifted_exp_coeffs(l1 - l2, l3 - l2);
    let z = y.shift(-l2);
    let z2 = z.square();
    let s = l2.exp();
    let out = SymMat3::new(
        s * (1.0 + b * z.xx + c * z2.xx),
        s * (b * z.xy + c * z2.xy),
        s * (b * z.xz + c * z2.xz),
        s * (1.0 + b * z.yy + c * z2.yy),
        s * (b * z.yz + c * z2.yz),
        s * (1.0 + b * z.zz + c * z2.zz),
    );
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow(l1))
    }
}

/// Coefficients `(a, b, c)` with `f(Y) = aI + bY + cY²`, obtained from the
/// Lagrange form of the Vandermonde system on pairwise distinct eigenvalues.
///
/// `f_values[i]` must be `f(lambdas[i])`.
pub fn vandermonde_coeffs(f_values: [f64; 3], lambdas: [f64; 3]) -> Result<(f64, f64, f64)> {
    let [l1, l2, l3] = lambdas;
    if l1 == l2 || l2 == l3 || l1 == l3 {
        return Err(Error::DegenerateSpectrum(lambdas));
    }
    let s = f_values[0] / ((l1 - l2) * (l1 - l3));
    let t = f_values[1] / ((l2 - l3) * (l2 - l1));
    let u = f_values[2] / ((l3 - l1) * (l3 - l2));
    let a = s * l2 * l3 + t * l3 * l1 + u * l1 * l2;
    let b = -s * (l2 + l3) - t * (l3 + l1) - u * (l1 + l2);
    let c = s + t + u;
    Ok((a, b, c))
}

/// `aI + bY + cY²`.
pub fn apply_quadratic((a, b, c): (f64, f64, f64), y: &SymMat3) -> SymMat3 {
    y.square().scale(c) + y.scale(b) + SymMat3::scalar(a)
}
