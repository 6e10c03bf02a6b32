//! Euclidean parametrisation of orientation-preserving 3D affine
//! transformations.
//!
//! A transformation `A = T(l)·R·S` is represented by the twelve unconstrained
//! numbers `(l, log R, log S) ∈ ℝ³ × so(3) × sym(3)`. The maps in both
//! directions are closed-form ([`param::phi`], [`param::psi`]); blending,
//! pose interpolation and mesh shape blending are linear operations in that
//! space ([`blend`], [`meshblend`]).
//!
//! ```
//! use affparam::{phi, psi, HomAffine3, Mat3, Vec3};
//!
//! let a = HomAffine3::new(
//!     Mat3::from_rows([[0.0, -2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 2.0]]),
//!     Vec3::new(1.0, 0.0, 0.0),
//! );
//! let p = psi(&a).unwrap();
//! assert!(a.distance_sq(&phi(&p).unwrap()) < 1e-28);
//! ```

pub mod bench;
pub mod blend;
pub mod error;
pub mod expmap;
pub mod linalg3;
pub mod logmap;
pub mod meshblend;
pub mod obj;
pub mod oracle;
pub mod param;
mod series;

pub use error::{Error, Result};
pub use linalg3::{gram_eigenvalues, spd_eigenvalues, sym_eigenvalues, AntiSymMat3, Mat3, SymEig3, SymMat3, Vec3};
pub use param::{phi, psi, psi_consistent, AffineParam12, HomAffine3, TransformClass};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
