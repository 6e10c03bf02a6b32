//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! with a nonzero status if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use affparam::bench::{random_sym, rng_from_seed, roundtrip_error_stats, sym_error_stats, timing_run, Kernel};
use affparam::blend::{blend, Branch, WeightedTransforms};
use affparam::expmap::{
    apply_quadratic, e2, exp_so3, exp_sym3, sinc_guarded, vandermonde_coeffs, E2_SERIES_THRESHOLD,
    SINC_THRESHOLD, SPREAD_SERIES_THRESHOLD,
};
use affparam::logmap::{
    ell2, log_so3, log_spd, signed_angle, L2_SERIES_THRESHOLD, LOG_SPREAD_SERIES_THRESHOLD,
    NEAR_PI_THRESHOLD,
};
use affparam::meshblend::{CompatibleSet, ShapeBlender, TriMesh};
use affparam::oracle::{exp_series, jacobi_eig};
use affparam::*;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

fn rotation(axis: Vec3, angle: f64) -> Mat3 {
    exp_so3(&AntiSymMat3::from_axis_vector(axis * angle))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let report = roundtrip_error_stats(100_000, 1e-3, 1);
    let elapsed = start.elapsed();
    let err = report.max_sq_frobenius_error;
    outcome(
        err <= 1e-20 && elapsed < Duration::from_secs(10),
        format!("max |A - φ(ψ(A))|² = {err:.3e} over 1e5, {:.2?}", elapsed),
    )
}

fn symmetric_fidelity() -> Outcome {
    let s = sym_error_stats(100_000, 5.0, 2);
    outcome(
        s.max_log_exp_sq <= 1e-22 && s.max_exp_oracle_frob <= 1e-12,
        format!(
            "log∘exp {:.3e}, exp vs oracle {:.3e} (exp∘log on S up to e⁵: {:.3e}, not bounded)",
            s.max_log_exp_sq, s.max_exp_oracle_frob, s.max_exp_log_sq
        ),
    )
}

fn speed() -> Outcome {
    let reports = timing_run(100_000, &[Kernel::ExpSym, Kernel::LogSpd], 5, 3);
    let ratios: Vec<(String, f64)> = reports
        .iter()
        .map(|r| (r.name.clone(), r.speed_ratio.unwrap_or(0.0)))
        .collect();
    let pass = ratios.iter().all(|(_, r)| *r >= 1.3);
    let detail = ratios
        .iter()
        .map(|(n, r)| format!("{n} {r:.2}x"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn twist_tracking() -> Outcome {
    let axis = Vec3::new(1.0, 2.0, -2.0) * (1.0 / 3.0);
    let end = 4.0 * PI;
    let steps = (end / 0.1).ceil() as usize;
    let mut angles = Vec::new();
    let mut principal_max: f64 = 0.0;
    let mut principal_min: f64 = f64::INFINITY;
    let mut prev = AffineParam12::default();
    let reference = AntiSymMat3::from_axis_vector(axis);
    for k in 0..=steps {
        let t = (0.1 * k as f64).min(end);
        let p = AffineParam12::new(Vec3::ZERO, AntiSymMat3::from_axis_vector(axis * t), SymMat3::ZERO);
        let a = phi(&p).unwrap();
        let c = match psi_consistent(&a, &prev) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("psi_consistent failed at {t}: {e}")),
        };
        angles.push(signed_angle(&c.x, &reference));
        prev = c;
        let theta = psi(&a).unwrap().x.angle();
        principal_max = principal_max.max(theta);
        principal_min = principal_min.min(theta);
    }
    let increasing = angles.windows(2).all(|w| w[1] > w[0]);
    let last = *angles.last().unwrap();
    let principal_ok = principal_min >= 0.0 && principal_max <= PI;
    outcome(
        increasing && (last - end).abs() <= 1e-6 && principal_ok,
        format!(
            "{} samples, consistent end {last:.9} (4π = {end:.9}), principal range [{principal_min:.3}, {principal_max:.3}]",
            angles.len()
        ),
    )
}

fn class_closure() -> Outcome {
    let mut rng = rng_from_seed(5);
    let mut failures = Vec::new();
    let mut min_det = f64::INFINITY;
    for class in TransformClass::ALL {
        for _ in 0..200 {
            let transforms: Vec<_> = (0..4)
                .map(|_| {
                    let p = AffineParam12::from_array(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
                    phi(&class.project(&p)).unwrap()
                })
                .collect();
            let w: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let b = WeightedTransforms::new(transforms, w).and_then(|wt| blend(&wt, Branch::Principal));
            match b {
                Ok(b) => {
                    min_det = min_det.min(b.det());
                    if !class.contains_transform(&b, 1e-8) || b.det() <= 0.0 {
                        failures.push(class.name());
                    }
                }
                Err(_) => failures.push(class.name()),
            }
        }
    }
    failures.dedup();
    outcome(
        failures.is_empty(),
        format!("8 classes x 200 trials, min det {min_det:.3e}, failing classes {failures:?}"),
    )
}

/// A 10×10 grid of 200 faces on a wavy sheet.
fn sheet(n: usize) -> TriMesh {
    let mut vertices = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
            vertices.push(Vec3::new(x, y, 0.1 * (3.0 * x).sin() * y));
        }
    }
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let mut faces = Vec::new();
    for i in 0..n {
        for j in 0..n {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriMesh::new(vertices, faces).unwrap()
}

fn mesh_reproduction() -> Outcome {
    let start = Instant::now();
    let rest = sheet(10);
    // Roll the sheet around the x axis and stretch it.
    let target = TriMesh {
        vertices: rest
            .vertices
            .iter()
            .map(|v| {
                let a = 1.5 * v.y;
                Vec3::new(1.3 * v.x + 0.2, (1.0 + v.z) * a.sin(), (1.0 + v.z) * a.cos())
            })
            .collect(),
        faces: rest.faces.clone(),
    };
    let set = match CompatibleSet::new(rest.clone(), vec![target.clone()]) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let blender = match ShapeBlender::new(set) {
        Ok(b) => b,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let (Ok(at_rest), Ok(at_target)) = (blender.blend(&[0.0]), blender.blend(&[1.0])) else {
        return outcome(false, "blend failed".into());
    };
    let e0 = at_rest.mesh.relative_distance(&rest);
    let e1 = at_target.mesh.relative_distance(&target);
    let elapsed = start.elapsed();
    outcome(
        e0 <= 1e-6 && e1 <= 1e-6 && elapsed < Duration::from_secs(5),
        format!("{} faces, rest {e0:.2e}, target {e1:.2e}, {:.2?}", rest.faces.len(), elapsed),
    )
}

/// Largest output change over `pairs` evaluations straddling a threshold.
/// `f` gets the pair index and a relative offset `d`; inputs sit at
/// `t(1 ± d)`.
fn straddle(pairs: usize, mut f: impl FnMut(usize, f64) -> f64) -> f64 {
    (0..pairs)
        .map(|k| {
            let d = 1e-13 * (1.0 + (k % 10) as f64);
            f(k, d)
        })
        .fold(0.0, f64::max)
}

fn continuity() -> Outcome {
    let n = 1000;
    let mut rng = rng_from_seed(7);
    let mut worst = Vec::new();

    let t = SINC_THRESHOLD;
    worst.push((
        "sinc",
        straddle(n, |_, d| {
            let axis = random_unit(&mut rng);
            let a = rotation(axis, t * (1.0 - d));
            let b = rotation(axis, t * (1.0 + d));
            (sinc_guarded(t - d * t) - sinc_guarded(t + d * t)).abs().max((a - b).frobenius())
        }),
    ));

    let t = E2_SERIES_THRESHOLD;
    worst.push((
        "e2",
        straddle(n, |k, d| {
            let s = if k % 2 == 0 { t } else { -t };
            (e2(s * (1.0 - d)) - e2(s * (1.0 + d))).abs()
        }),
    ));

    let t = SPREAD_SERIES_THRESHOLD;
    worst.push((
        "exp spread",
        straddle(n, |_, d| {
            let mid = rng.random_range(-2.0..2.0);
            let l3 = rng.random_range(-2.0..2.0);
            let frac = rng.random_range(0.0..1.0);
            let spectrum = |gap: f64| [l3 + gap, l3 + frac * gap, l3];
            let q_axis = random_unit(&mut rng);
            let q = rotation(q_axis, mid);
            let build = |s: [f64; 3]| (q * Mat3::diag(s[0], s[1], s[2]) * q.transpose()).sym_part();
            let a = exp_sym3(&build(spectrum(t * (1.0 - d)))).unwrap();
            let b = exp_sym3(&build(spectrum(t * (1.0 + d)))).unwrap();
            (a - b).frobenius() / a.frobenius()
        }),
    ));

    let t = L2_SERIES_THRESHOLD;
    worst.push((
        "ℒ₂",
        straddle(n, |k, d| {
            let x = if k % 2 == 0 { 1.0 + t } else { 1.0 - t };
            let h = x - 1.0;
            (ell2(1.0 + h * (1.0 - d)) - ell2(1.0 + h * (1.0 + d))).abs()
        }),
    ));

    let t = LOG_SPREAD_SERIES_THRESHOLD;
    worst.push((
        "log spread",
        straddle(n, |_, d| {
            let scale = 10f64.powf(rng.random_range(-2.0..2.0));
            let frac = rng.random_range(0.0..1.0);
            let axis = random_unit(&mut rng);
            let angle = rng.random_range(0.0..PI);
            let q = rotation(axis, angle);
            // Spectrum relative to λ₂ is (1 + (1 - frac)g, 1, 1 - frac·g).
            let build = |g: f64| {
                let s = [scale * (1.0 + (1.0 - frac) * g), scale, scale * (1.0 - frac * g)];
                (q * Mat3::diag(s[0], s[1], s[2]) * q.transpose()).sym_part()
            };
            let a = log_spd(&build(t * (1.0 - d))).unwrap();
            let b = log_spd(&build(t * (1.0 + d))).unwrap();
            (a - b).frobenius()
        }),
    ));

    let t = PI - NEAR_PI_THRESHOLD;
    worst.push((
        "near π",
        straddle(n, |_, d| {
            let axis = random_unit(&mut rng);
            let a = log_so3(&rotation(axis, t * (1.0 - d))).unwrap();
            let b = log_so3(&rotation(axis, t * (1.0 + d))).unwrap();
            (a.axis_vector() - b.axis_vector()).norm() * 2f64.sqrt()
        }),
    ));

    let max = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    let detail = worst
        .iter()
        .map(|(name, v)| format!("{name} {v:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(max <= 1e-10, format!("{n} pairs each: {detail}"))
}

fn oracle_agreement() -> Outcome {
    let n = 10_000;
    let mut rng = rng_from_seed(11);

    let mut rodrigues: f64 = 0.0;
    for _ in 0..n {
        let angle = rng.random_range(0.0..10.0);
        let x = AntiSymMat3::from_axis_vector(random_unit(&mut rng) * angle);
        rodrigues = rodrigues.max((exp_so3(&x) - exp_series(&x.to_mat3())).frobenius());
    }

    let mut eig: f64 = 0.0;
    for _ in 0..n {
        let y = random_sym(&mut rng, 5.0);
        let ours = sym_eigenvalues(&y).to_array();
        let jac = jacobi_eig(&y).values;
        for (a, b) in ours.iter().zip(jac) {
            eig = eig.max((a - b).abs());
        }
    }

    let mut vandermonde: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for _ in 0..n {
        let y = random_sym(&mut rng, 5.0);
        let e = sym_eigenvalues(&y);
        let l = e.to_array();
        min_gap = min_gap.min((l[0] - l[1]).min(l[1] - l[2]));
        let Ok(coeffs) = vandermonde_coeffs(l.map(f64::exp), l) else {
            continue;
        };
        let closed = exp_sym3(&y).unwrap();
        let v_exp = apply_quadratic(coeffs, &y);
        vandermonde = vandermonde.max((v_exp - closed).frobenius() / closed.frobenius());

        let s = closed;
        let ls = sym_eigenvalues(&s).to_array();
        let coeffs = vandermonde_coeffs(ls.map(f64::ln), ls).unwrap();
        let v_log = apply_quadratic(coeffs, &s);
        let c_log = log_spd(&s).unwrap();
        vandermonde = vandermonde.max((v_log - c_log).frobenius() / c_log.frobenius().max(1.0));
    }

    outcome(
        rodrigues <= 1e-11 && eig <= 1e-11 && vandermonde <= 1e-11,
        format!(
            "Rodrigues {rodrigues:.2e}, eigenvalues {eig:.2e}, Vandermonde {vandermonde:.2e} (min gap {min_gap:.1e})"
        ),
    )
}

fn main() -> ExitCode {
    type Check = (&'static str, fn() -> Outcome);
    let criteria: [Check; 8] = [
        ("round-trip fidelity", round_trip),
        ("symmetric exp/log fidelity", symmetric_fidelity),
        ("relative speed", speed),
        ("large-rotation tracking", twist_tracking),
        ("class closure", class_closure),
        ("mesh blend reproduction", mesh_reproduction),
        ("branch-fallback continuity", continuity),
        ("oracle agreement", oracle_agreement),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
