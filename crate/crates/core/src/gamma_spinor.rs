//! Dirac-Pauli γ-matrices and the `A` / `A⁻¹` transforms between `C⁴`
//! spinor fields and `H(C)`-valued fields.
//!
//! `A` acts on a spinor field by a constant matrix combined with the
//! argument reflection `x3 -> -x3`:
//!
//! ```text
//! A[Φ](x) = M_A Φ(x̃),    A⁻¹[ρ](x) = M_A⁻¹ ρ(x̃),    x̃ = (x1, x2, -x3)
//! ```
//!
//! [`apply_a`] / [`apply_a_inv`] are the pointwise matrix maps; [`lift_a`] /
//! [`lift_a_inv`] add the reflection at field level. Under this pair the
//! quaternionic operator `D + M^α` with `α = -(iω i1 + m i2)` is similar to
//! `iωγ0 - Σ γ_k ∂_k + im`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::boundary_ops::{fd_apply, FdOperator};
use crate::cqalg::{Complex, ComplexQuaternion, C0, C1, CI};
use crate::error::Result;
use crate::fd;
use crate::field::{QuatField, SpinorField};
use crate::surface::SurfaceMesh;
use crate::{reflect_x3, Point};

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Spinor4 {
    pub c: [Complex; 4],
}

impl Spinor4 {
    pub const ZERO: Self = Self { c: [C0; 4] };

    pub const fn new(c: [Complex; 4]) -> Self {
        Self { c }
    }

    /// The `k`-th standard basis spinor.
    pub fn basis(k: usize) -> Self {
        let mut c = [C0; 4];
        c[k] = C1;
        Self { c }
    }

    pub fn norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl fmt::Debug for Spinor4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.c;
        write!(f, "[{a}, {b}, {c}, {d}]")
    }
}

impl Add for Spinor4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { c: std::array::from_fn(|k| self.c[k] + rhs.c[k]) }
    }
}

impl Sub for Spinor4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { c: std::array::from_fn(|k| self.c[k] - rhs.c[k]) }
    }
}

impl Neg for Spinor4 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c: self.c.map(|z| -z) }
    }
}

impl Mul<f64> for Spinor4 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { c: self.c.map(|z| z * s) }
    }
}

impl Mul<Complex> for Spinor4 {
    type Output = Self;
    fn mul(self, s: Complex) -> Self {
        Self { c: self.c.map(|z| z * s) }
    }
}

/// 4×4 complex matrix, row major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix4 {
    pub m: [[Complex; 4]; 4],
}

impl CMatrix4 {
    pub const ZERO: Self = Self { m: [[C0; 4]; 4] };

    pub fn identity() -> Self {
        let mut m = Self::ZERO;
        for k in 0..4 {
            m.m[k][k] = C1;
        }
        m
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> Complex) -> Self {
        Self { m: std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))) }
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::from_fn(|r, c| self.m[r][c] * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for CMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.m.iter()).finish()
    }
}

impl Index<(usize, usize)> for CMatrix4 {
    type Output = Complex;
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.m[r][c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix4 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.m[r][c]
    }
}

impl Add for CMatrix4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.m[r][c] + rhs.m[r][c])
    }
}

impl Sub for CMatrix4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.m[r][c] - rhs.m[r][c])
    }
}

impl Neg for CMatrix4 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-C1)
    }
}

impl Mul for CMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| (0..4).map(|k| self.m[r][k] * rhs.m[k][c]).sum())
    }
}

impl Mul<Spinor4> for CMatrix4 {
    type Output = Spinor4;
    fn mul(self, v: Spinor4) -> Spinor4 {
        Spinor4 { c: std::array::from_fn(|r| (0..4).map(|k| self.m[r][k] * v.c[k]).sum()) }
    }
}

impl Mul<Complex> for CMatrix4 {
    type Output = Self;
    fn mul(self, s: Complex) -> Self {
        self.scale(s)
    }
}

fn real_matrix(rows: [[f64; 4]; 4]) -> CMatrix4 {
    CMatrix4::from_fn(|r, c| Complex::new(rows[r][c], 0.0))
}

/// `γ_k` for `k ∈ {0, 1, 2, 3, 5}` in the Dirac-Pauli representation.
///
/// # Panics
///
/// For any other index.
pub fn gamma(k: usize) -> CMatrix4 {
    match k {
        0 => real_matrix([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]),
        1 => real_matrix([
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ]),
        2 => {
            let mut g = CMatrix4::ZERO;
            g[(0, 3)] = CI;
            g[(1, 2)] = -CI;
            g[(2, 1)] = -CI;
            g[(3, 0)] = CI;
            g
        }
        3 => real_matrix([
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]),
        5 => real_matrix([
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]),
        _ => panic!("no gamma matrix with index {k}"),
    }
}

/// `γ1 γ2 γ3`
pub fn gamma123() -> CMatrix4 {
    gamma(1) * gamma(2) * gamma(3)
}

/// The matrix of `A` (including the global factor ½).
pub fn a_matrix() -> CMatrix4 {
    let mut a = CMatrix4::ZERO;
    a[(0, 1)] = -C1;
    a[(0, 2)] = C1;
    a[(1, 0)] = CI;
    a[(1, 3)] = -CI;
    a[(2, 0)] = -C1;
    a[(2, 3)] = -C1;
    a[(3, 1)] = CI;
    a[(3, 2)] = CI;
    a.scale(Complex::new(0.5, 0.0))
}

/// The matrix of `A⁻¹`.
pub fn a_inv_matrix() -> CMatrix4 {
    let mut a = CMatrix4::ZERO;
    a[(0, 1)] = -CI;
    a[(0, 2)] = -C1;
    a[(1, 0)] = -C1;
    a[(1, 3)] = -CI;
    a[(2, 0)] = C1;
    a[(2, 3)] = -CI;
    a[(3, 1)] = CI;
    a[(3, 2)] = -C1;
    a
}

fn quat_to_spinor(q: ComplexQuaternion) -> Spinor4 {
    Spinor4 { c: q.c }
}

fn spinor_to_quat(v: Spinor4) -> ComplexQuaternion {
    ComplexQuaternion { c: v.c }
}

/// Pointwise `ρ = M_A Φ`.
pub fn apply_a(phi: Spinor4) -> ComplexQuaternion {
    spinor_to_quat(a_matrix() * phi)
}

/// Pointwise `Φ = M_A⁻¹ ρ`.
pub fn apply_a_inv(rho: ComplexQuaternion) -> Spinor4 {
    a_inv_matrix() * quat_to_spinor(rho)
}

/// Conjugates a spinor matrix into the quaternion picture: `ρ ↦ M_A G M_A⁻¹ ρ`.
pub fn conjugate_by_a(g: CMatrix4, rho: ComplexQuaternion) -> ComplexQuaternion {
    apply_a(g * apply_a_inv(rho))
}

/// `(lift_a q)(x) = M_A q(x̃)`.
pub fn lift_a(q: &SpinorField) -> QuatField {
    let inner = q.clone();
    QuatField::new(move |x| apply_a(inner.eval(reflect_x3(x))))
        .with_singularities(q.singular_points().iter().copied().map(reflect_x3))
}

/// `(lift_a_inv f)(x) = M_A⁻¹ f(x̃)`.
pub fn lift_a_inv(f: &QuatField) -> SpinorField {
    let inner = f.clone();
    SpinorField::new(move |x| apply_a_inv(inner.eval(reflect_x3(x))))
        .with_singularities(f.singular_points().iter().copied().map(reflect_x3))
}

/// [`lift_a`] for fields living on the exterior/interior of `mesh`, which must be
/// symmetric under `x3 -> -x3`.
pub fn lift_a_checked(q: &SpinorField, mesh: &SurfaceMesh) -> Result<QuatField> {
    mesh.reflection_permutation()?;
    Ok(lift_a(q))
}

/// [`lift_a_inv`] with the same symmetry requirement as [`lift_a_checked`].
pub fn lift_a_inv_checked(f: &QuatField, mesh: &SurfaceMesh) -> Result<SpinorField> {
    mesh.reflection_permutation()?;
    Ok(lift_a_inv(f))
}

/// `α⃗ = -(iω i1 + m i2)`, the quaternionic counterpart of the mass/frequency pair.
pub fn spinor_alpha(omega: f64, m: f64) -> ComplexQuaternion {
    -(ComplexQuaternion::I1 * Complex::new(0.0, omega) + ComplexQuaternion::I2 * m)
}

/// `𝔻_{ω,m} q (x) = iωγ0 q - Σ γ_k ∂_k q + im q`, by central differences.
pub fn dirac_wm_fd(q: &SpinorField, omega: f64, m: f64, x: Point, h: f64) -> Spinor4 {
    let eval = |y: Point| q.eval(y);
    let grad = fd::gradient(&eval, x, h);
    let value = q.eval(x);
    let mut out = gamma(0) * value * Complex::new(0.0, omega) + value * Complex::new(0.0, m);
    for (k, dk) in grad.into_iter().enumerate() {
        out = out - gamma(k + 1) * dk;
    }
    out
}

/// `|D_α f(x) - (-A γ1γ2γ3 𝔻_{ω,m} A⁻¹ f)(x)|_c`, both sides by finite differences.
pub fn similarity_residual(f: &QuatField, omega: f64, m: f64, x: Point, h: f64) -> f64 {
    let alpha = spinor_alpha(omega, m);
    let lhs = fd_apply(FdOperator::DAlpha(alpha), f, x, h);

    let q = lift_a_inv(f);
    let dq = dirac_wm_fd(&q, omega, m, reflect_x3(x), h);
    let rhs = -apply_a(gamma123() * dq);
    lhs.dist_c(&rhs)
}
