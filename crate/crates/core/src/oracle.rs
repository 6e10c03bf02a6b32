//! Reference implementations for cross-checking the closed forms.
//!
//! Nothing here calls into [`crate::expmap`] or [`crate::logmap`]: the
//! exponential is the scaled-and-squared Taylor series and matrix functions
//! of symmetric matrices go through an explicit cyclic Jacobi
//! eigendecomposition, `f(Y) = P diag(f(dᵢ)) Pᵀ`.

use crate::error::{Error, Result};
use crate::linalg3::{Mat3, SymMat3};

/// Matrix exponential by its power series, `Σ Aⁱ/i!`.
///
/// The argument is scaled by `2⁻ᵏ` until its norm is at most 1/2, the series
/// is summed until terms stop contributing, and the result is squared `k`
/// times.
pub fn exp_series(a: &Mat3) -> Mat3 {
    let norm = a.frobenius();
    let mut k = 0;
    if norm > 0.5 {
        k = (norm / 0.5).log2().ceil() as i32;
    }
    let scaled = a.scale(0.5f64.powi(k));
    let mut sum = Mat3::IDENTITY;
    let mut term = Mat3::IDENTITY;
    for i in 1..60 {
        term = (term * scaled).scale(1.0 / i as f64);
        sum = sum + term;
        if term.frobenius() <= 1e-18 * sum.frobenius() {
            break;
        }
    }
    for _ in 0..k {
        sum = sum * sum;
    }
    sum
}

/// Eigendecomposition `Y = P diag(values) Pᵀ` with orthonormal eigenvector
/// columns in `vectors`, sorted by descending eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiEig {
    pub values: [f64; 3],
    pub vectors: Mat3,
    pub sweeps: usize,
}

impl JacobiEig {
    pub fn reconstruct(&self) -> Mat3 {
        let d = Mat3::diag(self.values[0], self.values[1], self.values[2]);
        self.vectors * d * self.vectors.transpose()
    }
}

/// Cyclic Jacobi eigensolver for symmetric 3×3 matrices.
///
/// Sweeps over the three off-diagonal pairs, annihilating each with a plane
/// rotation, until the off-diagonal norm is below `1e-16` relative to the
/// matrix norm (or exactly zero).
pub fn jacobi_eig(y: &SymMat3) -> JacobiEig {
    let mut a = y.to_mat3();
    let mut v = Mat3::IDENTITY;
    let scale = y.frobenius();
    let mut sweeps = 0;
    for sweep in 0..64 {
        sweeps = sweep;
        let off = (2.0 * (a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2))).sqrt();
        if off <= 1e-16 * scale {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            // A ← JᵀAJ, V ← VJ with J the rotation in the (p, q) plane.
            for k in 0..3 {
                let akp = a[(k, p)];
                let akq = a[(k, q)];
                a[(k, p)] = c * akp - s * akq;
                a[(k, q)] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[(p, k)];
                let aqk = a[(q, k)];
                a[(p, k)] = c * apk - s * aqk;
                a[(q, k)] = s * apk + c * aqk;
            }
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            for k in 0..3 {
                let vkp = v[(k, p)];
                let vkq = v[(k, q)];
                v[(k, p)] = c * vkp - s * vkq;
                v[(k, q)] = s * vkp + c * vkq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.map(|i| a[(i, i)]);
    let vectors = Mat3::from_cols(v.col(order[0]), v.col(order[1]), v.col(order[2]));
    JacobiEig {
        values,
        vectors,
        sweeps,
    }
}

/// Scalar functions available to [`matfun_diag`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatFun {
    Exp,
    Log,
    Sqrt,
    InvSqrt,
}

impl MatFun {
    fn apply(self, d: f64) -> f64 {
        match self {
            MatFun::Exp => d.exp(),
            MatFun::Log => d.ln(),
            MatFun::Sqrt => d.sqrt(),
            MatFun::InvSqrt => 1.0 / d.sqrt(),
        }
    }
}

/// `f(Y) = P diag(f(dᵢ)) Pᵀ` through [`jacobi_eig`].
pub fn matfun_diag(y: &SymMat3, f: MatFun) -> Result<SymMat3> {
    let eig = jacobi_eig(y);
    if f != MatFun::Exp && !(eig.values[2] > 0.0) {
        return Err(Error::NotPositiveDefinite(eig.values[2]));
    }
    let fd = eig.values.map(|d| f.apply(d));
    let p = &eig.vectors;
    let entry = |i: usize, j: usize| (0..3).map(|k| p[(i, k)] * fd[k] * p[(j, k)]).sum::<f64>();
    Ok(SymMat3::new(
        entry(0, 0),
        entry(0, 1),
        entry(0, 2),
        entry(1, 1),
        entry(1, 2),
        entry(2, 2),
    ))
}
