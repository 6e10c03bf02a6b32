//! Shape blending of compatibly triangulated meshes.
//!
//! Each face of each target mesh defines an affine map from the matching
//! rest face (the three vertices plus the unit normal). For given weights the
//! per-face maps are blended in parameter space. The blended maps disagree on
//! shared edges, so the output mesh is the least-squares fit: vertex
//! positions, plus one auxiliary point per face standing in for the deformed
//! normal, minimising `Σⱼ |Aⱼ - A'ⱼ|²_F` over the full 3×4 blocks.
//!
//! The energy is a quadratic form whose matrix only depends on the rest mesh,
//! and it decouples into the three coordinates, so [`ShapeBlender`] assembles
//! the matrix once and solves three right-hand sides per weight vector.

use crate::blend::blend_params;
use crate::error::{Error, Result};
use crate::linalg3::{Mat3, Vec3};
use crate::param::{phi, psi, AffineParam12, HomAffine3};

/// Rest triangles with area at or below this are rejected.
pub const MIN_FACE_AREA: f64 = 1e-12;

/// Relative residual at which the conjugate gradient solve stops.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Triangle mesh: vertex positions and index triples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

impl TriMesh {
    /// Checks that every face index is in range.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if let Some((j, f)) = faces.iter().enumerate().find(|(_, f)| f.iter().any(|&i| i >= n)) {
            return Err(Error::IncompatibleMeshes(format!(
                "face {j} {f:?} indexes past the {n} vertices"
            )));
        }
        Ok(Self { vertices, faces })
    }

    pub fn triangle(&self, face: usize) -> [Vec3; 3] {
        self.faces[face].map(|i| self.vertices[i])
    }

    /// Half the norm of the edge cross product.
    pub fn area(&self, face: usize) -> f64 {
        let [a, b, c] = self.triangle(face);
        0.5 * (b - a).cross(c - a).norm()
    }

    /// Largest vertex distance to `other`, relative to this mesh's bounding
    /// box diagonal.
    pub fn relative_distance(&self, other: &TriMesh) -> f64 {
        let max = self
            .vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max);
        max / self.diagonal().max(f64::MIN_POSITIVE)
    }

    fn diagonal(&self) -> f64 {
        let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for v in &self.vertices {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        if self.vertices.is_empty() {
            0.0
        } else {
            (hi - lo).norm()
        }
    }
}

/// Edge frame `[v₁ - v₀, v₂ - v₀, n]` with `n` the unit normal, or
/// `DegenerateTriangle` when the face has no area.
fn face_frame(tri: &[Vec3; 3], face: usize) -> Result<Mat3> {
    let (e1, e2) = (tri[1] - tri[0], tri[2] - tri[0]);
    let cross = e1.cross(e2);
    let area = 0.5 * cross.norm();
    if !(area > MIN_FACE_AREA) {
        return Err(Error::DegenerateTriangle { face, area });
    }
    Ok(Mat3::from_cols(e1, e2, cross * (1.0 / cross.norm())))
}

/// The affine map taking the rest triangle (and its unit normal) to the
/// target triangle (and its unit normal), with `v₀` mapped to `v₀`.
///
/// `face` only labels errors.
pub fn per_face_affine(rest: &[Vec3; 3], target: &[Vec3; 3], face: usize) -> Result<HomAffine3> {
    let v0 = face_frame(rest, face)?;
    let vi = face_frame(target, face)?;
    let linear = vi * v0.inverse()?;
    let det = linear.det();
    if !(det > 0.0) {
        return Err(Error::OrientationFlip { face, det });
    }
    Ok(HomAffine3::new(linear, target[0] - linear.mul_vec(rest[0])))
}

/// A rest mesh and targets sharing its connectivity.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibleSet {
    rest: TriMesh,
    targets: Vec<TriMesh>,
}

impl CompatibleSet {
    pub fn new(rest: TriMesh, targets: Vec<TriMesh>) -> Result<Self> {
        for (k, t) in targets.iter().enumerate() {
            if t.vertices.len() != rest.vertices.len() {
                return Err(Error::IncompatibleMeshes(format!(
                    "target {k} has {} vertices, rest has {}",
                    t.vertices.len(),
                    rest.vertices.len()
                )));
            }
            if t.faces != rest.faces {
                return Err(Error::IncompatibleMeshes(format!(
                    "target {k} does not share the rest mesh's faces"
                )));
            }
        }
        for j in 0..rest.faces.len() {
            let area = rest.area(j);
            if !(area > MIN_FACE_AREA) {
                return Err(Error::DegenerateTriangle { face: j, area });
            }
        }
        Ok(Self { rest, targets })
    }

    pub fn rest(&self) -> &TriMesh {
        &self.rest
    }

    pub fn targets(&self) -> &[TriMesh] {
        &self.targets
    }
}

/// Symmetric sparse matrix in compressed rows, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
struct SparseSym {
    row_start: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    fn from_triplets(n: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_start = vec![0; n + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last = None;
        for (i, j, v) in entries {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            cols.push(j);
            values.push(v);
            row_start[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..n {
            row_start[i + 1] += row_start[i];
        }
        Self {
            row_start,
            cols,
            values,
        }
    }

    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let range = self.row_start[i]..self.row_start[i + 1];
            *o = self.cols[range.clone()]
                .iter()
                .zip(&self.values[range])
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.row_start.len() - 1)
            .map(|i| {
                let range = self.row_start[i]..self.row_start[i + 1];
                self.cols[range.clone()]
                    .iter()
                    .zip(&self.values[range])
                    .find(|(&j, _)| j == i)
                    .map_or(0.0, |(_, &v)| v)
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients for `A x = b`, starting from
/// `x`. Returns the iteration count.
fn conjugate_gradient(a: &SparseSym, inv_diag: &[f64], b: &[f64], x: &mut [f64]) -> Result<usize> {
    let n = b.len();
    let b_norm = dot(b, b).sqrt();
    let mut r = vec![0.0; n];
    a.mul(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let target = SOLVER_TOLERANCE * b_norm;
    if dot(&r, &r).sqrt() <= target {
        return Ok(0);
    }
    let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let cap = 20 * n.max(1);
    for it in 1..=cap {
        a.mul(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if dot(&r, &r).sqrt() <= target {
            return Ok(it);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolverNotConverged {
        iterations: cap,
        residual: dot(&r, &r).sqrt() / b_norm.max(f64::MIN_POSITIVE),
    })
}

/// Per-face linear map from the face's four unknowns (the three vertices and
/// the auxiliary point, one coordinate at a time) to one row of the 3×4
/// block: `row = xᵀ M`.
type FaceMap = [[f64; 4]; 4];

fn face_map(rest: &[Vec3; 3], frame_inv: &Mat3) -> FaceMap {
    // [v₁ - v₀, v₂ - v₀, a - v₀] = X E with E mapping the unknowns to edges.
    const E: [[f64; 3]; 4] = [[-1.0, -1.0, -1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut m = [[0.0; 4]; 4];
    for (r, e) in E.iter().enumerate() {
        for c in 0..3 {
            m[r][c] = (0..3).map(|k| e[k] * frame_inv[(k, c)]).sum();
        }
        // Translation: v₀ - L r₀.
        let lr: f64 = (0..3).map(|c| m[r][c] * rest[0][c]).sum();
        m[r][3] = if r == 0 { 1.0 } else { 0.0 } - lr;
    }
    m
}

/// Result of [`ShapeBlender::patch`].
#[derive(Debug, Clone, PartialEq)]
pub struct PatchSolution {
    pub mesh: TriMesh,
    /// Auxiliary normal point of each face.
    pub aux: Vec<Vec3>,
    /// `Σⱼ |Aⱼ - A'ⱼ|²_F` at the solution.
    pub energy: f64,
    /// Conjugate gradient iterations, summed over the three coordinates.
    pub iterations: usize,
}

/// Shape blender with the rest mesh's least-squares system assembled.
#[derive(Debug, Clone)]
pub struct ShapeBlender {
    set: CompatibleSet,
    face_maps: Vec<FaceMap>,
    /// `ψ` of each target's per-face maps, `target_params[k][j]`.
    target_params: Vec<Vec<AffineParam12>>,
    matrix: SparseSym,
    inv_diag: Vec<f64>,
    /// Vertices touched by no face; they are blended linearly instead.
    isolated: Vec<usize>,
}

impl ShapeBlender {
    pub fn new(set: CompatibleSet) -> Result<Self> {
        let rest = &set.rest;
        let (nv, nf) = (rest.vertices.len(), rest.faces.len());
        let mut face_maps = Vec::with_capacity(nf);
        for j in 0..nf {
            let tri = rest.triangle(j);
            face_maps.push(face_map(&tri, &face_frame(&tri, j)?.inverse()?));
        }
        let mut target_params = Vec::with_capacity(set.targets.len());
        for (k, target) in set.targets.iter().enumerate() {
            let params = (0..nf)
                .map(|j| {
                    per_face_affine(&rest.triangle(j), &target.triangle(j), j)
                        .and_then(|a| psi(&a))
                        .map_err(|e| e.at(k))
                })
                .collect::<Result<Vec<_>>>()?;
            target_params.push(params);
        }
        let mut entries = Vec::with_capacity(16 * nf);
        for (j, m) in face_maps.iter().enumerate() {
            let idx = Self::unknowns(rest, nv, j);
            for a in 0..4 {
                for b in 0..4 {
                    let v: f64 = (0..4).map(|c| m[a][c] * m[b][c]).sum();
                    entries.push((idx[a], idx[b], v));
                }
            }
        }
        let mut used = vec![false; nv];
        for f in &rest.faces {
            for &i in f {
                used[i] = true;
            }
        }
        let isolated: Vec<usize> = (0..nv).filter(|&i| !used[i]).collect();
        // Unconstrained rows get a unit diagonal so the system stays definite.
        entries.extend(isolated.iter().map(|&i| (i, i, 1.0)));
        let matrix = SparseSym::from_triplets(nv + nf, entries);
        let inv_diag = matrix.diagonal().iter().map(|&d| 1.0 / d).collect();
        Ok(Self {
            set,
            face_maps,
            target_params,
            matrix,
            inv_diag,
            isolated,
        })
    }

    pub fn set(&self) -> &CompatibleSet {
        &self.set
    }

    fn unknowns(rest: &TriMesh, nv: usize, face: usize) -> [usize; 4] {
        let [a, b, c] = rest.faces[face];
        [a, b, c, nv + face]
    }

    /// Blended per-face maps `φ(Σₖ wₖ ψ(Aₖⱼ))`.
    pub fn face_transforms(&self, weights: &[f64]) -> Result<Vec<HomAffine3>> {
        if weights.len() != self.target_params.len() {
            return Err(Error::LengthMismatch {
                what: "weights",
                got: weights.len(),
                expected: self.target_params.len(),
            });
        }
        let mut column = Vec::with_capacity(weights.len());
        (0..self.face_maps.len())
            .map(|j| {
                column.clear();
                column.extend(self.target_params.iter().map(|p| p[j]));
                phi(&blend_params(&column, weights))
            })
            .collect()
    }

    /// The mesh (and auxiliary points) whose per-face maps are closest to
    /// `face_transforms` in the least-squares sense. Vertices in no face keep
    /// their rest positions.
    pub fn patch(&self, face_transforms: &[HomAffine3]) -> Result<PatchSolution> {
        let rest = &self.set.rest;
        let (nv, nf) = (rest.vertices.len(), rest.faces.len());
        if face_transforms.len() != nf {
            return Err(Error::LengthMismatch {
                what: "face transforms",
                got: face_transforms.len(),
                expected: nf,
            });
        }
        let n = nv + nf;
        let mut coords = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut iterations = 0;
        for (k, x) in coords.iter_mut().enumerate() {
            let mut rhs = vec![0.0; n];
            for (j, (m, a)) in self.face_maps.iter().zip(face_transforms).enumerate() {
                let target = [a.linear[(k, 0)], a.linear[(k, 1)], a.linear[(k, 2)], a.translation[k]];
                for (r, &i) in Self::unknowns(rest, nv, j).iter().enumerate() {
                    rhs[i] += (0..4).map(|c| m[r][c] * target[c]).sum::<f64>();
                }
            }
            for &i in &self.isolated {
                rhs[i] = rest.vertices[i][k];
            }
            // Warm start from the rest mesh and its normal points.
            for (i, v) in rest.vertices.iter().enumerate() {
                x[i] = v[k];
            }
            for j in 0..nf {
                let tri = rest.triangle(j);
                let normal = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
                x[nv + j] = tri[0][k] + normal[k] / normal.norm();
            }
            iterations += conjugate_gradient(&self.matrix, &self.inv_diag, &rhs, x)?;
        }
        let point = |i: usize| Vec3::new(coords[0][i], coords[1][i], coords[2][i]);
        let mesh = TriMesh {
            vertices: (0..nv).map(point).collect(),
            faces: rest.faces.clone(),
        };
        let aux: Vec<Vec3> = (nv..n).map(point).collect();
        let energy = self.energy(&mesh, &aux, face_transforms);
        Ok(PatchSolution {
            mesh,
            aux,
            energy,
            iterations,
        })
    }

    /// `Σⱼ |Aⱼ - A'ⱼ|²_F` where `Aⱼ` maps the rest face onto the face of
    /// `mesh` with normal point `aux[j]`.
    pub fn energy(&self, mesh: &TriMesh, aux: &[Vec3], face_transforms: &[HomAffine3]) -> f64 {
        let nv = mesh.vertices.len();
        let mut total = 0.0;
        for (j, (m, a)) in self.face_maps.iter().zip(face_transforms).enumerate() {
            let idx = Self::unknowns(&self.set.rest, nv, j);
            let pts = idx.map(|i| if i < nv { mesh.vertices[i] } else { aux[i - nv] });
            for k in 0..3 {
                let target = [a.linear[(k, 0)], a.linear[(k, 1)], a.linear[(k, 2)], a.translation[k]];
                for (c, t) in target.iter().enumerate() {
                    let v: f64 = (0..4).map(|r| pts[r][k] * m[r][c]).sum();
                    total += (v - t) * (v - t);
                }
            }
        }
        total
    }

    /// The blended mesh `U(w)`. Vertices in no face are blended linearly.
    pub fn blend(&self, weights: &[f64]) -> Result<PatchSolution> {
        let maps = self.face_transforms(weights)?;
        let mut sol = self.patch(&maps)?;
        let rest = &self.set.rest;
        for &i in &self.isolated {
            let r = rest.vertices[i];
            sol.mesh.vertices[i] = self
                .set
                .targets
                .iter()
                .zip(weights)
                .fold(r, |acc, (t, &w)| acc + (t.vertices[i] - r) * w);
        }
        Ok(sol)
    }
}

/// `U(w)` for a compatible set.
pub fn blend_shapes(set: &CompatibleSet, weights: &[f64]) -> Result<TriMesh> {
    Ok(ShapeBlender::new(set.clone())?.blend(weights)?.mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expmap::exp_so3;
    use crate::linalg3::AntiSymMat3;

    /// An `n × n` grid of quads split into triangles, slightly warped.
    pub(crate) fn grid(n: usize) -> TriMesh {
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

    fn mapped(mesh: &TriMesh, f: impl Fn(Vec3) -> Vec3) -> TriMesh {
        TriMesh {
            vertices: mesh.vertices.iter().map(|&v| f(v)).collect(),
            faces: mesh.faces.clone(),
        }
    }

    fn rot(v: Vec3) -> Mat3 {
        exp_so3(&AntiSymMat3::from_axis_vector(v))
    }

    #[test]
    fn per_face_affine_examples() {
        let tri = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.2, 0.0), Vec3::new(0.3, 1.0, 0.4)];
        let a = per_face_affine(&tri, &tri, 0).unwrap();
        assert!(a.distance_sq(&HomAffine3::IDENTITY) < 1e-28);
        let t = Vec3::new(0.5, -1.0, 2.0);
        let a = per_face_affine(&tri, &tri.map(|v| v + t), 0).unwrap();
        assert!(a.distance_sq(&HomAffine3::from_translation(t)) < 1e-28);
        let r = rot(Vec3::new(0.3, -1.1, 0.7));
        let a = per_face_affine(&tri, &tri.map(|v| r.mul_vec(v)), 0).unwrap();
        assert!((a.linear.transpose() * a.linear - Mat3::IDENTITY).frobenius() < 1e-10);
        for (i, v) in tri.iter().enumerate() {
            assert!((a.transform_point(*v) - r.mul_vec(*v)).norm() < 1e-14, "vertex {i}");
        }
        let flat = [tri[0], tri[1], tri[1] * 2.0];
        assert!(matches!(
            per_face_affine(&flat, &tri, 7),
            Err(Error::DegenerateTriangle { face: 7, .. })
        ));
    }

    #[test]
    fn compatibility_is_checked() {
        let g = grid(2);
        let mut other = g.clone();
        other.faces.swap(0, 1);
        assert!(matches!(
            CompatibleSet::new(g.clone(), vec![other]),
            Err(Error::IncompatibleMeshes(_))
        ));
        let mut short = g.clone();
        short.vertices.pop();
        assert!(CompatibleSet::new(g.clone(), vec![short]).is_err());
        assert!(TriMesh::new(g.vertices.clone(), vec![[0, 1, 99]]).is_err());
    }

    #[test]
    fn reproduces_rest_and_targets() {
        let rest = grid(4);
        let r = rot(Vec3::new(0.2, 0.9, -0.4));
        let bent = mapped(&rest, |v| {
            let angle = 1.2 * v.x;
            rot(Vec3::new(0.0, angle, 0.0)).mul_vec(v) + Vec3::new(0.0, 0.0, 0.3 * v.y * v.y)
        });
        let moved = mapped(&rest, |v| r.mul_vec(v * 1.5) + Vec3::new(2.0, -1.0, 0.5));
        let set = CompatibleSet::new(rest.clone(), vec![bent.clone(), moved.clone()]).unwrap();
        let blender = ShapeBlender::new(set).unwrap();
        let zero = blender.blend(&[0.0, 0.0]).unwrap();
        assert!(rest.relative_distance(&zero.mesh) < 1e-8);
        for (w, target) in [([1.0, 0.0], &bent), ([0.0, 1.0], &moved)] {
            let sol = blender.blend(&w).unwrap();
            assert!(target.relative_distance(&sol.mesh) < 1e-6);
            assert!(sol.energy < 1e-10);
        }
        assert!(blender.blend(&[1.0]).is_err());
    }

    #[test]
    fn half_blend_of_hinged_strip() {
        // Two triangles sharing the edge on the y axis; the target folds the
        // second one by 90° about that edge.
        let rest = TriMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(-1.0, 0.5, 0.0),
                Vec3::new(1.0, 0.5, 0.0),
            ],
            vec![[0, 1, 2], [0, 3, 1]],
        )
        .unwrap();
        let fold = rot(Vec3::new(0.0, -std::f64::consts::FRAC_PI_2, 0.0));
        let mut target = rest.clone();
        target.vertices[3] = fold.mul_vec(target.vertices[3]);
        let set = CompatibleSet::new(rest, vec![target]).unwrap();
        let out = blend_shapes(&set, &[0.5]).unwrap();
        let normal = |m: &TriMesh, f: usize| {
            let [a, b, c] = m.triangle(f);
            let n = (b - a).cross(c - a);
            n * (1.0 / n.norm())
        };
        let dihedral = normal(&out, 0).dot(normal(&out, 1)).clamp(-1.0, 1.0).acos();
        assert!((dihedral - std::f64::consts::FRAC_PI_4).abs() < 1e-6, "{dihedral}");
    }

    #[test]
    fn solution_is_a_least_squares_minimum() {
        let rest = grid(3);
        let set = CompatibleSet::new(
            rest.clone(),
            vec![
                mapped(&rest, |v| Vec3::new(v.x, v.y, v.z + 0.5 * v.x * v.y)),
                mapped(&rest, |v| Vec3::new(v.x * (1.0 + v.y), v.y, v.z)),
            ],
        )
        .unwrap();
        let blender = ShapeBlender::new(set).unwrap();
        let w = [0.7, -0.4];
        let maps = blender.face_transforms(&w).unwrap();
        let sol = blender.patch(&maps).unwrap();
        assert!(sol.energy > 1e-8, "blended maps should be incoherent");
        for i in 0..sol.mesh.vertices.len() {
            for axis in 0..3 {
                for step in [1e-4, -1e-4] {
                    let mut m = sol.mesh.clone();
                    let mut d = [0.0; 3];
                    d[axis] = step;
                    m.vertices[i] = m.vertices[i] + Vec3::from_array(d);
                    assert!(blender.energy(&m, &sol.aux, &maps) >= sol.energy);
                }
            }
        }
    }

    #[test]
    fn consistent_maps_are_recovered_exactly() {
        let rest = grid(3);
        let a = HomAffine3::from_rows_3x4([1.1, 0.2, 0.0, 0.3, -0.1, 0.9, 0.3, 0.0, 0.0, 0.1, 1.2, -0.5]);
        let target = mapped(&rest, |v| a.transform_point(v));
        let set = CompatibleSet::new(rest.clone(), vec![target.clone()]).unwrap();
        let blender = ShapeBlender::new(set).unwrap();
        let maps: Vec<_> = (0..rest.faces.len())
            .map(|j| per_face_affine(&rest.triangle(j), &target.triangle(j), j).unwrap())
            .collect();
        let sol = blender.patch(&maps).unwrap();
        assert!(sol.energy < 1e-10);
        assert!(target.relative_distance(&sol.mesh) < 1e-9);
    }

    #[test]
    fn isolated_vertices_blend_linearly() {
        let mut rest = grid(1);
        rest.vertices.push(Vec3::new(5.0, 5.0, 5.0));
        let mut target = rest.clone();
        target.vertices[4] = Vec3::new(7.0, 5.0, 5.0);
        let set = CompatibleSet::new(rest, vec![target]).unwrap();
        let out = blend_shapes(&set, &[0.25]).unwrap();
        assert_eq!(out.vertices[4], Vec3::new(5.5, 5.0, 5.0));
    }
}
