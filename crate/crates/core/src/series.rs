//! Truncated power series used by the guarded branches of the closed forms.
//!
//! Each table holds the Taylor coefficients of a helper function around its
//! removable singularity. Twenty terms keep the truncation error below
//! `1e-19` on the regions where the series are selected.

pub(crate) const TERMS: usize = 20;

/// `e₂(x) = (eˣ - 1 - x)/x² = Σ xᵏ/(k+2)!`.
pub(crate) const E2: [f64; TERMS] = {
    let mut c = [0.0; TERMS];
    let mut fact = 2.0; // (k+2)! for k = 0
    let mut k = 0;
    while k < TERMS {
        c[k] = 1.0 / fact;
        fact *= (k + 3) as f64;
        k += 1;
    }
    c
};

/// `ℒ₂(1+h) = (log(1+h) - h)/h = Σ_{k≥1} (-1)ᵏ hᵏ/(k+1)`; index 0 is the
/// (vanishing) constant term.
pub(crate) const L2: [f64; TERMS + 2] = {
    let mut c = [0.0; TERMS + 2];
    let mut k = 1;
    while k < TERMS + 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[k] = sign / (k + 1) as f64;
        k += 1;
    }
    c
};

/// Horner evaluation of `Σ coeffs[k] xᵏ`.
#[inline]
pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `Σ coeffs[j] h_j(p, q)` where `h_j` is the complete homogeneous symmetric
/// polynomial of degree `j` in two variables.
///
/// For a power series `s`, the first divided difference `(s(p) - s(q))/(p - q)`
/// equals this sum over the coefficients shifted by one, so it is the
/// cancellation-free way to evaluate divided differences at close nodes.
#[inline]
pub(crate) fn sum_complete_homogeneous(coeffs: &[f64], p: f64, q: f64) -> f64 {
    let mut h = 1.0;
    let mut q_pow = 1.0;
    let mut acc = 0.0;
    for (j, &c) in coeffs.iter().enumerate() {
        if j > 0 {
            q_pow *= q;
            h = p * h + q_pow;
        }
        acc += c * h;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e2_table() {
        assert_eq!(E2[0], 0.5);
        assert!((E2[1] - 1.0 / 6.0).abs() < 1e-17);
        assert!((E2[2] - 1.0 / 24.0).abs() < 1e-17);
        let x = 0.3f64;
        let exact = (x.exp_m1() - x) / (x * x);
        assert!((horner(&E2, x) - exact).abs() < 1e-15);
    }

    #[test]
    fn l2_table() {
        assert_eq!(L2[0], 0.0);
        assert_eq!(L2[1], -0.5);
        assert!((L2[2] - 1.0 / 3.0).abs() < 1e-17);
        let h = 0.05f64;
        let exact = (h.ln_1p() - h) / h;
        assert!((horner(&L2, h) - exact).abs() < 1e-16);
    }

    #[test]
    fn divided_difference_by_homogeneous_sums() {
        let (p, q) = (0.4, -0.7);
        let dd = (horner(&E2, p) - horner(&E2, q)) / (p - q);
        assert!((sum_complete_homogeneous(&E2[1..], p, q) - dd).abs() < 1e-15);
        // Equal nodes give the derivative.
        let x: f64 = 0.2;
        let deriv: f64 = E2
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c * x.powi(k as i32 - 1))
            .sum();
        assert!((sum_complete_homogeneous(&E2[1..], x, x) - deriv).abs() < 1e-15);
    }
}
