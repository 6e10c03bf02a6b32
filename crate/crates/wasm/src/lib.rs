//! Browser bindings for the demo page in `www/`.
//!
//! Matrices cross the boundary as flat `Float64Array`s of the 12 entries of
//! the 3×4 block, row-major. The computations live in plain functions so
//! they can be tested without a JavaScript host.

use affparam::blend::{blend, Branch, ProbeDeformer, WeightedTransforms};
use affparam::logmap::signed_angle;
use affparam::{phi, psi, psi_consistent, AffineParam12, AntiSymMat3, HomAffine3, SymMat3, Vec3};
use wasm_bindgen::prelude::*;

fn matrix(v: &[f64], what: &str) -> Result<HomAffine3, String> {
    let arr: [f64; 12] = v
        .try_into()
        .map_err(|_| format!("{what}: expected 12 values, got {}", v.len()))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err(format!("{what}: values must be finite"));
    }
    Ok(HomAffine3::from_rows_3x4(arr))
}

/// `(1 - t)·ψ(A) + t·ψ(B)` mapped back through φ. `t` outside `[0, 1]`
/// extrapolates.
pub fn blend_pair_impl(a: &[f64], b: &[f64], t: f64) -> Result<Vec<f64>, String> {
    let pair = vec![matrix(a, "first transform")?, matrix(b, "second transform")?];
    let wt = WeightedTransforms::new(pair, vec![1.0 - t, t]).map_err(|e| e.to_string())?;
    let out = blend(&wt, Branch::Principal).map_err(|e| e.to_string())?;
    Ok(out.to_rows_3x4().to_vec())
}

/// Rotation angle recovered at each step of a twist about a fixed axis,
/// sampled every `step` radians up to `total`. With `consistent` each step
/// uses the logarithm nearest the previous one; otherwise the principal one.
pub fn twist_angles_impl(total: f64, step: f64, consistent: bool) -> Result<Vec<f64>, String> {
    if !(step > 0.0) || !total.is_finite() || total.abs() / step > 1e5 {
        return Err("step must be positive and total / step at most 1e5".into());
    }
    let axis = Vec3::new(0.0, 0.0, 1.0);
    let reference = AntiSymMat3::from_axis_vector(axis);
    let n = (total.abs() / step).ceil() as usize;
    let mut prev = AffineParam12::ZERO;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = (k as f64 * step).min(total.abs()) * total.signum();
        let p = AffineParam12::new(Vec3::ZERO, AntiSymMat3::from_axis_vector(axis * t), SymMat3::ZERO);
        let a = phi(&p).map_err(|e| e.to_string())?;
        let q = if consistent { psi_consistent(&a, &prev) } else { psi(&a) };
        let q = q.map_err(|e| e.to_string())?;
        out.push(signed_angle(&q.x, &reference));
        prev = q;
    }
    Ok(out)
}

/// Deforms an `n × n` grid over `[-1, 1]²` (in the `z = 0` plane) with two
/// probes. The left probe's weight falls from 1 at `x = -1` to 0 at `x = 1`
/// and the right probe's weight is its complement. Returns `x, y` pairs,
/// row by row.
pub fn deform_grid_impl(left: &[f64], right: &[f64], n: usize) -> Result<Vec<f64>, String> {
    if !(2..=200).contains(&n) {
        return Err("grid size must be between 2 and 200".into());
    }
    let probes = [matrix(left, "left probe")?, matrix(right, "right probe")?];
    let deformer = ProbeDeformer::new(&probes).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let x = -1.0 + 2.0 * j as f64 / (n - 1) as f64;
            let y = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let w = 0.5 * (1.0 - x);
            let p = deformer
                .deform(Vec3::new(x, y, 0.0), &[w, 1.0 - w])
                .map_err(|e| e.to_string())?;
            out.extend([p.x, p.y]);
        }
    }
    Ok(out)
}

#[wasm_bindgen(js_name = blendPair)]
pub fn blend_pair(a: &[f64], b: &[f64], t: f64) -> Result<Vec<f64>, JsError> {
    blend_pair_impl(a, b, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = twistAngles)]
pub fn twist_angles(total: f64, step: f64, consistent: bool) -> Result<Vec<f64>, JsError> {
    twist_angles_impl(total, step, consistent).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = deformGrid)]
pub fn deform_grid(left: &[f64], right: &[f64], n: usize) -> Result<Vec<f64>, JsError> {
    deform_grid_impl(left, right, n).map_err(|e| JsError::new(&e))
}
