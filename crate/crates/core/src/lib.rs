//! Complex-quaternionic analysis for the time-harmonic Dirac operator.
//!
//! The crate provides the algebra `H(C)` of complex quaternions, the
//! Dirac-Pauli γ-matrices together with the `A` / `A⁻¹` transforms that map
//! `C⁴` spinor fields to quaternion-valued fields, closed-form fundamental
//! solutions of `D ± ν` and `D + M^α`, Cauchy-type boundary integral
//! operators discretised on triangulated closed surfaces, and evaluators for
//! Sommerfeld-type radiation conditions.
//!
//! Differential identities are checked with central finite differences and
//! boundary integrals with one-point quadrature on icosphere meshes.

pub mod boundary_ops;
pub mod cqalg;
pub mod error;
pub mod fd;
pub mod field;
pub mod gamma_spinor;
pub mod kernels;
pub mod surface;

/// A point of R³.
pub type Point = [f64; 3];

pub use cqalg::{Complex, ComplexQuaternion, ProjectorPair};
pub use error::{Error, Result};
pub use field::{AnyField, Field, QuatField, SpinorField};
pub use gamma_spinor::{CMatrix4, Spinor4};
pub use kernels::KernelParams;
pub use surface::{BallGrid, SurfaceMesh};

pub(crate) fn norm3(x: Point) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

pub(crate) fn sub3(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Mirror image under `x3 -> -x3`.
pub fn reflect_x3(x: Point) -> Point {
    [x[0], x[1], -x[2]]
}
