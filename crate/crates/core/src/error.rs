use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// `a ā` vanishes (relative to `|a|_c²`), so `a` has no inverse.
    #[error("quaternion is zero or a zero divisor: |a ā| = {norm:e}, |a|_c^2 = {modulus_sq:e}")]
    ZeroDivisorOrZero { norm: f64, modulus_sq: f64 },

    #[error("input quaternion is zero")]
    ZeroInput,

    /// `α⃗² = 0`; the projector pair is undefined and the ν = 0 branch must be used.
    #[error("alpha is a zero divisor (alpha^2 = 0); projectors are undefined")]
    ZeroDivisorAlpha,

    #[error("expected a pure-vector quaternion, scalar part has modulus {scalar:e}")]
    NotPureVector { scalar: f64 },

    #[error("expected a zero divisor, but |alpha^2| / |alpha|_c^2 = {margin:e}")]
    NotZeroDivisor { margin: f64 },

    #[error("kernel evaluated at a singular point (|x| = {distance:e})")]
    SingularPoint { distance: f64 },

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("target is too close to the boundary: distance {distance:e} < {min:e}")]
    TooCloseToBoundary { distance: f64, min: f64 },

    #[error("surface is not symmetric under x3 -> -x3 (node {node} has no mirror image)")]
    DomainNotReflectionSymmetric { node: usize },

    #[error("mesh format: {0}")]
    MeshFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
