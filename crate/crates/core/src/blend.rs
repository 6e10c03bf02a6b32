//! Weighted blending in parameter space, pose interpolation along a track of
//! transforms, and the probe point deformer.
//!
//! Blending sums parameters linearly and maps back, `φ(Σ wᵢ ψ(Aᵢ))`. The
//! result always has positive determinant, and because every class of
//! transforms is a linear subspace of the parameter space, blending members
//! of a class stays inside it for any weights.

use crate::error::{Error, Result};
use crate::linalg3::Vec3;
use crate::param::{phi, psi, psi_consistent, AffineParam12, HomAffine3};

/// Transforms with one weight each. Weights are any reals; they are not
/// normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTransforms {
    transforms: Vec<HomAffine3>,
    weights: Vec<f64>,
}

impl WeightedTransforms {
    pub fn new(transforms: Vec<HomAffine3>, weights: Vec<f64>) -> Result<Self> {
        if transforms.is_empty() {
            return Err(Error::LengthMismatch {
                what: "transforms",
                got: 0,
                expected: 1,
            });
        }
        if weights.len() != transforms.len() {
            return Err(Error::LengthMismatch {
                what: "weights",
                got: weights.len(),
                expected: transforms.len(),
            });
        }
        Ok(Self {
            transforms,
            weights,
        })
    }

    pub fn transforms(&self) -> &[HomAffine3] {
        &self.transforms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Which rotation logarithm [`blend`] takes of each transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch<'a> {
    /// Angles in `[0, π]`.
    Principal,
    /// The logarithm closest to the matching reference parameters, one per
    /// transform.
    Consistent(&'a [AffineParam12]),
}

/// Parameters of every transform, on the requested branch. Errors name the
/// offending transform.
pub fn params_of(transforms: &[HomAffine3], branch: Branch<'_>) -> Result<Vec<AffineParam12>> {
    if let Branch::Consistent(refs) = branch {
        if refs.len() != transforms.len() {
            return Err(Error::LengthMismatch {
                what: "references",
                got: refs.len(),
                expected: transforms.len(),
            });
        }
    }
    transforms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            match branch {
                Branch::Principal => psi(a),
                Branch::Consistent(refs) => psi_consistent(a, &refs[i]),
            }
            .map_err(|e| e.at(i))
        })
        .collect()
}

/// `Σ wᵢ pᵢ`.
pub fn blend_params(params: &[AffineParam12], weights: &[f64]) -> AffineParam12 {
    params
        .iter()
        .zip(weights)
        .fold(AffineParam12::ZERO, |acc, (p, &w)| acc + *p * w)
}

/// `φ(Σ wᵢ ψ(Aᵢ))`.
pub fn blend(wt: &WeightedTransforms, branch: Branch<'_>) -> Result<HomAffine3> {
    let params = params_of(&wt.transforms, branch)?;
    phi(&blend_params(&params, &wt.weights))
}

/// Interpolation scheme for [`interpolate_pose`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Curve {
    /// Piecewise linear between knots.
    Linear,
    /// Cubic Hermite with Catmull-Rom tangents; passes through every knot.
    #[default]
    CatmullRom,
    /// Uniform cubic B-spline with clamped ends, using the knots as control
    /// points. Hits the first and last knot but only approximates the rest.
    BSpline,
}

impl Curve {
    pub const ALL: [Self; 3] = [Curve::Linear, Curve::CatmullRom, Curve::BSpline];

    pub fn name(self) -> &'static str {
        match self {
            Curve::Linear => "linear",
            Curve::CatmullRom => "hermite",
            Curve::BSpline => "bspline",
        }
    }
}

impl std::str::FromStr for Curve {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(Curve::Linear),
            "hermite" | "catmull-rom" => Ok(Curve::CatmullRom),
            "bspline" | "b-spline" => Ok(Curve::BSpline),
            _ => Err(format!("unknown curve `{s}` (linear, hermite, bspline)")),
        }
    }
}

/// Parameters sampled at strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseTrack {
    knots: Vec<AffineParam12>,
    times: Vec<f64>,
}

impl PoseTrack {
    pub fn new(knots: Vec<AffineParam12>, times: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidTrack(format!(
                "need at least 2 knots, got {}",
                knots.len()
            )));
        }
        if times.len() != knots.len() {
            return Err(Error::LengthMismatch {
                what: "times",
                got: times.len(),
                expected: knots.len(),
            });
        }
        if let Some(i) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidTrack(format!("time {i} is not finite")));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTrack(format!(
                "times must increase strictly, but t[{}] = {} ≤ t[{}] = {}",
                i + 1,
                times[i + 1],
                i,
                times[i]
            )));
        }
        Ok(Self { knots, times })
    }

    /// Track through the parameters of `transforms`. With `consistent`, each
    /// knot takes the rotation logarithm closest to the previous one, so
    /// sequences turning past `π` keep accumulating angle.
    pub fn from_transforms(
        transforms: &[HomAffine3],
        times: Vec<f64>,
        consistent: bool,
    ) -> Result<Self> {
        let mut knots: Vec<AffineParam12> = Vec::with_capacity(transforms.len());
        for (i, a) in transforms.iter().enumerate() {
            let p = match knots.last() {
                Some(prev) if consistent => psi_consistent(a, prev),
                _ => psi(a),
            };
            knots.push(p.map_err(|e| e.at(i))?);
        }
        Self::new(knots, times)
    }

    pub fn knots(&self) -> &[AffineParam12] {
        &self.knots
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Interpolated parameters at time `t`.
    pub fn sample(&self, t: f64, curve: Curve) -> Result<AffineParam12> {
        let (start, end) = (self.start(), self.end());
        if !(t >= start && t <= end) {
            return Err(Error::OutOfRange { t, start, end });
        }
        Ok(match curve {
            Curve::Linear => {
                let (j, s) = self.segment(t);
                self.knots[j] * (1.0 - s) + self.knots[j + 1] * s
            }
            Curve::CatmullRom => self.hermite(t),
            Curve::BSpline => self.bspline(t),
        })
    }

    /// Segment index `j` with `t ∈ [tⱼ, tⱼ₊₁]` and the local coordinate in
    /// `[0, 1]`.
    fn segment(&self, t: f64) -> (usize, f64) {
        let n = self.times.len();
        let j = self.times[1..n - 1].partition_point(|&tk| tk <= t);
        let (t0, t1) = (self.times[j], self.times[j + 1]);
        (j, ((t - t0) / (t1 - t0)).clamp(0.0, 1.0))
    }

    /// Finite-difference tangent at knot `j`, one-sided at the ends.
    fn tangent(&self, j: usize) -> AffineParam12 {
        let n = self.knots.len();
        let (a, b) = (j.saturating_sub(1), (j + 1).min(n - 1));
        (self.knots[b] - self.knots[a]) * (1.0 / (self.times[b] - self.times[a]))
    }

    fn hermite(&self, t: f64) -> AffineParam12 {
        let (j, s) = self.segment(t);
        let dt = self.times[j + 1] - self.times[j];
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.knots[j] * h00
            + self.tangent(j) * (h10 * dt)
            + self.knots[j + 1] * h01
            + self.tangent(j + 1) * (h11 * dt)
    }

    /// de Boor evaluation on the clamped uniform knot vector, with the time
    /// range mapped linearly onto the spline's parameter range.
    fn bspline(&self, t: f64) -> AffineParam12 {
        let n = self.knots.len();
        let degree = 3.min(n - 1);
        let spans = n - degree;
        let u = (t - self.start()) / (self.end() - self.start()) * spans as f64;
        // Knot vector: `degree + 1` zeros, 1..spans-1, `degree + 1` copies of spans.
        let knot = |i: usize| (i as f64 - degree as f64).clamp(0.0, spans as f64);
        let span = ((u.floor() as usize).min(spans - 1)) + degree;
        let mut d: Vec<AffineParam12> = (0..=degree).map(|j| self.knots[j + span - degree]).collect();
        for r in 1..=degree {
            for j in (r..=degree).rev() {
                let i = j + span - degree;
                let (lo, hi) = (knot(i), knot(i + degree + 1 - r));
                let alpha = if hi > lo { (u - lo) / (hi - lo) } else { 0.0 };
                d[j] = d[j - 1] * (1.0 - alpha) + d[j] * alpha;
            }
        }
        d[degree]
    }
}

/// `φ` of the track interpolated at `t`.
pub fn interpolate_pose(track: &PoseTrack, t: f64, curve: Curve) -> Result<HomAffine3> {
    phi(&track.sample(t, curve)?)
}

/// A set of probe transforms with their parameters precomputed, for
/// deforming many points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeDeformer {
    params: Vec<AffineParam12>,
}

impl ProbeDeformer {
    pub fn new(probes: &[HomAffine3]) -> Result<Self> {
        Ok(Self {
            params: params_of(probes, Branch::Principal)?,
        })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// The blended probe transform for the weights at a point.
    pub fn transform_at(&self, weights: &[f64]) -> Result<HomAffine3> {
        if weights.len() != self.params.len() {
            return Err(Error::LengthMismatch {
                what: "weights",
                got: weights.len(),
                expected: self.params.len(),
            });
        }
        phi(&blend_params(&self.params, weights))
    }

    pub fn deform(&self, u: Vec3, weights: &[f64]) -> Result<Vec3> {
        Ok(self.transform_at(weights)?.transform_point(u))
    }
}

/// Moves `u` by the probes blended with the weights at `u`.
pub fn deform_point(u: Vec3, probes: &[HomAffine3], weights_at_u: &[f64]) -> Result<Vec3> {
    let wt = WeightedTransforms::new(probes.to_vec(), weights_at_u.to_vec())?;
    Ok(blend(&wt, Branch::Principal)?.transform_point(u))
}
