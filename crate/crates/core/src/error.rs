use thiserror::Error;

/// Errors raised by the transformation kernels and the applications built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("eigenvalues {0:?} are not pairwise distinct")]
    DegenerateSpectrum([f64; 3]),

    #[error("exponential overflows: largest eigenvalue {0} is not representable")]
    Overflow(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not a rotation (|RᵀR - I|_F = {orthogonality:e}, det = {det})")]
    NotARotation { orthogonality: f64, det: f64 },

    #[error("linear part is not orientation preserving (det = {det:e})")]
    NotOrientationPreserving { det: f64 },

    #[error("parameter {t} is outside the curve domain [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid pose track: {0}")]
    InvalidTrack(String),

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("face {face} is degenerate (area {area:e})")]
    DegenerateTriangle { face: usize, area: f64 },

    #[error("face {face} maps with a reflection (det = {det:e})")]
    OrientationFlip { face: usize, det: f64 },

    #[error("meshes are not compatible: {0}")]
    IncompatibleMeshes(String),

    #[error("least-squares solve did not converge after {iterations} iterations (relative residual {residual:e})")]
    SolverNotConverged { iterations: usize, residual: f64 },

    #[error("transform {index}: {source}")]
    AtIndex { index: usize, source: Box<Error> },

    #[error("OBJ line {line}: {message}")]
    ObjParse { line: usize, message: String },
}

impl Error {
    /// Tags the error with the position of the offending input.
    pub fn at(self, index: usize) -> Self {
        Error::AtIndex {
            index,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
