//! Random-matrix error statistics and the timing harness.
//!
//! Samples come from a seeded ChaCha8 generator so every error report is
//! reproducible bit for bit; timings are, of course, not.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expmap::exp_sym3;
use crate::linalg3::{Mat3, SymMat3, Vec3};
use crate::logmap::log_spd;
use crate::oracle::{matfun_diag, MatFun};
use crate::param::{phi, psi, HomAffine3};

/// Name of the generator recorded in report headers.
pub const RNG_NAME: &str = "ChaCha8Rng";

/// Draws affine transformations with i.i.d. uniform `[-1, 1]` entries,
/// rejecting linear parts with `det ≤ det_floor`.
#[derive(Debug, Clone)]
pub struct AffineSampler {
    rng: ChaCha8Rng,
    det_floor: f64,
    drawn: u64,
    accepted: u64,
}

impl AffineSampler {
    /// `det_floor` must be positive.
    pub fn new(det_floor: f64, seed: u64) -> Self {
        assert!(det_floor > 0.0, "det_floor must be positive");
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            det_floor,
            drawn: 0,
            accepted: 0,
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.drawn == 0 {
            0.0
        } else {
            self.accepted as f64 / self.drawn as f64
        }
    }

    pub fn next_affine(&mut self) -> HomAffine3 {
        loop {
            self.drawn += 1;
            let a = random_affine_unfiltered(&mut self.rng);
            if a.det() > self.det_floor {
                self.accepted += 1;
                return a;
            }
        }
    }
}

impl Iterator for AffineSampler {
    type Item = HomAffine3;
    fn next(&mut self) -> Option<HomAffine3> {
        Some(self.next_affine())
    }
}

fn uniform_mat3(rng: &mut impl Rng) -> Mat3 {
    let mut m = Mat3::ZERO;
    m.m.iter_mut()
        .flatten()
        .for_each(|v| *v = rng.random_range(-1.0..=1.0));
    m
}

fn random_affine_unfiltered(rng: &mut impl Rng) -> HomAffine3 {
    let linear = uniform_mat3(rng);
    let t = Vec3::new(
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    );
    HomAffine3::new(linear, t)
}

/// One affine transformation with `det > det_floor`, entries uniform in `[-1, 1]`.
pub fn random_affine(rng: &mut impl Rng, det_floor: f64) -> HomAffine3 {
    loop {
        let a = random_affine_unfiltered(rng);
        if a.det() > det_floor {
            return a;
        }
    }
}

/// A symmetric matrix with uniformly random direction and Frobenius norm
/// uniform in `[0, max_norm]`.
pub fn random_sym(rng: &mut impl Rng, max_norm: f64) -> SymMat3 {
    loop {
        let y = SymMat3::from_array(std::array::from_fn(|_| rng.random_range(-1.0..=1.0)));
        let n = y.frobenius();
        if n > 1e-3 {
            return y.scale(max_norm * rng.random::<f64>() / n);
        }
    }
}

/// A seeded generator for the helpers above.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One row of a benchmark report.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub name: String,
    pub sample_count: usize,
    pub max_sq_frobenius_error: f64,
    /// Mean wall-clock time per call; `None` for error-only runs.
    pub mean_ns_per_call: Option<f64>,
    /// Oracle time over closed-form time, for kernels that have an oracle.
    pub speed_ratio: Option<f64>,
}

/// `max |A - φ(ψ(A))|²_F` over `n` seeded random transforms with
/// `det > det_floor`.
pub fn roundtrip_error_stats(n: usize, det_floor: f64, seed: u64) -> BenchReport {
    let mut sampler = AffineSampler::new(det_floor, seed);
    let max = (&mut sampler)
        .take(n)
        .map(|a| roundtrip_error(&a))
        .fold(0.0, f64::max);
    BenchReport {
        name: "phi_psi_roundtrip".into(),
        sample_count: n,
        max_sq_frobenius_error: max,
        mean_ns_per_call: None,
        speed_ratio: None,
    }
}

/// `|A - φ(ψ(A))|²_F`; infinite if either map fails.
pub fn roundtrip_error(a: &HomAffine3) -> f64 {
    match psi(a).and_then(|p| phi(&p)) {
        Ok(b) => a.distance_sq(&b),
        Err(_) => f64::INFINITY,
    }
}

/// Error statistics of the symmetric exponential and logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymErrorStats {
    pub sample_count: usize,
    /// `max |Y - log(exp(Y))|²_F`.
    pub max_log_exp_sq: f64,
    /// `max |S - exp(log S)|²_F` with `S = exp(Y)`.
    pub max_exp_log_sq: f64,
    /// `max |exp(Y) - oracle(Y)|_F`.
    pub max_exp_oracle_frob: f64,
    /// `max |exp(Y) - oracle(Y)|_F / |oracle(Y)|_F`.
    pub max_exp_oracle_rel: f64,
}

/// Closed-form exp/log round trips and oracle discrepancy over `n` random
/// symmetric matrices with Frobenius norm at most `max_norm`.
pub fn sym_error_stats(n: usize, max_norm: f64, seed: u64) -> SymErrorStats {
    let mut rng = rng_from_seed(seed);
    let mut stats = SymErrorStats {
        sample_count: n,
        max_log_exp_sq: 0.0,
        max_exp_log_sq: 0.0,
        max_exp_oracle_frob: 0.0,
        max_exp_oracle_rel: 0.0,
    };
    for _ in 0..n {
        let y = random_sym(&mut rng, max_norm);
        let (Ok(s), Ok(reference)) = (exp_sym3(&y), matfun_diag(&y, MatFun::Exp)) else {
            stats.max_log_exp_sq = f64::INFINITY;
            continue;
        };
        let (log_exp, exp_log) = match log_spd(&s) {
            Ok(l) => (
                (l - y).frobenius_sq(),
                exp_sym3(&l).map_or(f64::INFINITY, |e| (e - s).frobenius_sq()),
            ),
            Err(_) => (f64::INFINITY, f64::INFINITY),
        };
        let d = (s - reference).frobenius();
        stats.max_log_exp_sq = stats.max_log_exp_sq.max(log_exp);
        stats.max_exp_log_sq = stats.max_exp_log_sq.max(exp_log);
        stats.max_exp_oracle_frob = stats.max_exp_oracle_frob.max(d);
        stats.max_exp_oracle_rel = stats.max_exp_oracle_rel.max(d / reference.frobenius());
    }
    stats
}

/// Kernels measured by [`timing_run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Closed-form symmetric exponential.
    ExpSym,
    /// Symmetric exponential by Jacobi diagonalisation.
    ExpSymDiag,
    /// Closed-form SPD logarithm.
    LogSpd,
    /// SPD logarithm by Jacobi diagonalisation.
    LogSpdDiag,
    /// The parametrisation map.
    Phi,
    /// Its inverse.
    Psi,
}

impl Kernel {
    pub const ALL: [Kernel; 6] = [
        Kernel::ExpSym,
        Kernel::ExpSymDiag,
        Kernel::LogSpd,
        Kernel::LogSpdDiag,
        Kernel::Phi,
        Kernel::Psi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::ExpSym => "exp_sym3",
            Kernel::ExpSymDiag => "exp_sym3_diag",
            Kernel::LogSpd => "log_spd",
            Kernel::LogSpdDiag => "log_spd_diag",
            Kernel::Phi => "phi",
            Kernel::Psi => "psi",
        }
    }

    fn oracle(self) -> Option<Kernel> {
        match self {
            Kernel::ExpSym => Some(Kernel::ExpSymDiag),
            Kernel::LogSpd => Some(Kernel::LogSpdDiag),
            _ => None,
        }
    }
}

/// Pre-generated inputs shared by all kernels of a timing run.
struct Inputs {
    sym: Vec<SymMat3>,
    spd: Vec<SymMat3>,
    affine: Vec<HomAffine3>,
    params: Vec<crate::param::AffineParam12>,
}

impl Inputs {
    fn generate(n: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let sym: Vec<_> = (0..n).map(|_| random_sym(&mut rng, 5.0)).collect();
        let spd = sym
            .iter()
            .map(|y| exp_sym3(y).expect("bounded input"))
            .collect();
        let affine: Vec<_> = AffineSampler::new(1e-3, seed ^ 0x9e37_79b9_7f4a_7c15)
            .take(n)
            .collect();
        let params = affine
            .iter()
            .map(|a| psi(a).expect("det > 0"))
            .collect();
        Self {
            sym,
            spd,
            affine,
            params,
        }
    }
}

/// Minimum over `repeats` of the mean time per call, in nanoseconds.
fn time_kernel(kernel: Kernel, inputs: &Inputs, repeats: usize) -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        match kernel {
            Kernel::ExpSym => inputs.sym.iter().for_each(|y| {
                black_box(exp_sym3(black_box(y)).ok());
            }),
            Kernel::ExpSymDiag => inputs.sym.iter().for_each(|y| {
                black_box(matfun_diag(black_box(y), MatFun::Exp).ok());
            }),
            Kernel::LogSpd => inputs.spd.iter().for_each(|s| {
                black_box(log_spd(black_box(s)).ok());
            }),
            Kernel::LogSpdDiag => inputs.spd.iter().for_each(|s| {
                black_box(matfun_diag(black_box(s), MatFun::Log).ok());
            }),
            Kernel::Phi => inputs.params.iter().for_each(|p| {
                black_box(phi(black_box(p)).ok());
            }),
            Kernel::Psi => inputs.affine.iter().for_each(|a| {
                black_box(psi(black_box(a)).ok());
            }),
        }
        let n = match kernel {
            Kernel::ExpSym | Kernel::ExpSymDiag => inputs.sym.len(),
            Kernel::LogSpd | Kernel::LogSpdDiag => inputs.spd.len(),
            Kernel::Phi => inputs.params.len(),
            Kernel::Psi => inputs.affine.len(),
        };
        let ns = start.elapsed().as_nanos() as f64 / n.max(1) as f64;
        best = best.min(ns);
    }
    best
}

fn kernel_error(kernel: Kernel, inputs: &Inputs) -> f64 {
    let fold = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    match kernel {
        Kernel::ExpSym | Kernel::ExpSymDiag => fold(&mut inputs.sym.iter().map(|y| {
            match (exp_sym3(y), matfun_diag(y, MatFun::Exp)) {
                (Ok(a), Ok(b)) => (a - b).frobenius_sq(),
                _ => f64::INFINITY,
            }
        })),
        Kernel::LogSpd => fold(&mut inputs.spd.iter().map(|s| {
            log_spd(s)
                .and_then(|l| exp_sym3(&l))
                .map_or(f64::INFINITY, |e| (e - *s).frobenius_sq())
        })),
        Kernel::LogSpdDiag => fold(&mut inputs.spd.iter().map(|s| {
            matfun_diag(s, MatFun::Log)
                .and_then(|l| matfun_diag(&l, MatFun::Exp))
                .map_or(f64::INFINITY, |e| (e - *s).frobenius_sq())
        })),
        Kernel::Phi | Kernel::Psi => fold(&mut inputs.affine.iter().map(roundtrip_error)),
    }
}

/// Times each kernel on `n` pre-generated inputs (input generation is not
/// timed). Each kernel runs `repeats` times and the fastest mean is kept.
///
/// The error column is the kernel's own accuracy measure: discrepancy to the
/// diagonalisation oracle for the exponentials, `|S - exp(log S)|²_F` for the
/// logarithms, and the `φ∘ψ` round trip for the parametrisation maps.
pub fn timing_run(n: usize, kernels: &[Kernel], repeats: usize, seed: u64) -> Vec<BenchReport> {
    let inputs = Inputs::generate(n, seed);
    let mut times: Vec<(Kernel, f64)> = Vec::new();
    let time_of = |k: Kernel, times: &mut Vec<(Kernel, f64)>| -> f64 {
        if let Some(&(_, t)) = times.iter().find(|(kk, _)| *kk == k) {
            return t;
        }
        let t = time_kernel(k, &inputs, repeats);
        times.push((k, t));
        t
    };
    let mut reports = Vec::new();
    for &k in kernels {
        let t = time_of(k, &mut times);
        let speed_ratio = k.oracle().map(|o| time_of(o, &mut times) / t);
        reports.push(BenchReport {
            name: k.name().into(),
            sample_count: n,
            max_sq_frobenius_error: kernel_error(k, &inputs),
            mean_ns_per_call: Some(t),
            speed_ratio,
        });
    }
    reports
}

/// Writes reports as CSV: comment lines with the run metadata, then the
/// mandatory header row `name,n,max_sq_frob_error,mean_ns_per_call,speed_ratio`.
pub fn write_csv<W: Write>(mut w: W, reports: &[BenchReport], metadata: &[(&str, String)]) -> io::Result<()> {
    for (k, v) in metadata {
        writeln!(w, "# {k}={v}")?;
    }
    writeln!(w, "name,n,max_sq_frob_error,mean_ns_per_call,speed_ratio")?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    for r in reports {
        writeln!(
            w,
            "{},{},{:e},{},{}",
            r.name,
            r.sample_count,
            r.max_sq_frobenius_error,
            opt(r.mean_ns_per_call),
            opt(r.speed_ratio)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_respects_floor_and_seed() {
        let a: Vec<_> = AffineSampler::new(0.05, 7).take(200).collect();
        let b: Vec<_> = AffineSampler::new(0.05, 7).take(200).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|m| m.det() > 0.05));
        let c: Vec<_> = AffineSampler::new(0.05, 8).take(200).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn acceptance_rate_is_positive() {
        let mut s = AffineSampler::new(1e-3, 1);
        s.by_ref().take(1000).for_each(drop);
        let rate = s.acceptance_rate();
        assert!(rate > 0.3 && rate < 0.6, "rate {rate}");
    }

    #[test]
    fn identity_has_zero_roundtrip_error() {
        assert!(roundtrip_error(&HomAffine3::IDENTITY) <= 1e-28);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let reports = timing_run(1000, &[Kernel::ExpSym, Kernel::Psi], 1, 3);
        let mut out = Vec::new();
        write_csv(&mut out, &reports, &[("seed", "3".into())]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# seed=3");
        assert_eq!(lines[1], "name,n,max_sq_frob_error,mean_ns_per_call,speed_ratio");
        assert!(lines[2].starts_with("exp_sym3,1000,"));
        assert!(lines[3].starts_with("psi,1000,"));
        assert!(lines[3].ends_with(','));
    }

    #[test]
    fn error_stats_are_reproducible() {
        let a = roundtrip_error_stats(500, 1e-3, 11);
        let b = roundtrip_error_stats(500, 1e-3, 11);
        assert_eq!(a, b);
    }
}
