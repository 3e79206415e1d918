//! Complex quaternions `H(C)`.
//!
//! An element is `a = a0 + a1 i1 + a2 i2 + a3 i3` with complex components.
//! The quaternionic units satisfy `i_k² = -1`, `i1 i2 = -i2 i1 = i3` (and
//! cyclic), while the complex unit `i` commutes with every `i_k`. Unlike the
//! real quaternions this algebra has zero divisors: nonzero `a` with `a ā = 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::alpha_to_nu;
use crate::Point;

pub type Complex = num_complex::Complex64;

/// Relative threshold on `|a ā| / |a|_c²` below which `a` is treated as non-invertible.
pub const INVERSE_EPS: f64 = 1e-12;

/// Relative tolerance used by the zero-divisor classification.
pub const ZERO_DIVISOR_TOL: f64 = 1e-10;

pub(crate) const C0: Complex = Complex::new(0.0, 0.0);
pub(crate) const C1: Complex = Complex::new(1.0, 0.0);
pub(crate) const CI: Complex = Complex::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq, Default)]
pub struct ComplexQuaternion {
    pub c: [Complex; 4],
}

impl ComplexQuaternion {
    pub const ZERO: Self = Self { c: [C0; 4] };
    pub const ONE: Self = Self { c: [C1, C0, C0, C0] };
    pub const I1: Self = Self { c: [C0, C1, C0, C0] };
    pub const I2: Self = Self { c: [C0, C0, C1, C0] };
    pub const I3: Self = Self { c: [C0, C0, C0, C1] };

    pub const fn new(a0: Complex, a1: Complex, a2: Complex, a3: Complex) -> Self {
        Self { c: [a0, a1, a2, a3] }
    }

    pub fn from_real(a: [f64; 4]) -> Self {
        Self::new(a[0].into(), a[1].into(), a[2].into(), a[3].into())
    }

    pub fn scalar(s: Complex) -> Self {
        Self::new(s, C0, C0, C0)
    }

    pub fn vector(v: [Complex; 3]) -> Self {
        Self::new(C0, v[0], v[1], v[2])
    }

    /// The pure-vector quaternion `x1 i1 + x2 i2 + x3 i3`.
    pub fn from_point(x: Point) -> Self {
        Self::new(C0, x[0].into(), x[1].into(), x[2].into())
    }

    /// Basis element `i_k`, `k = 0..=3` (`i_0 = 1`).
    pub fn basis(k: usize) -> Self {
        let mut c = [C0; 4];
        c[k] = C1;
        Self { c }
    }

    pub fn nan() -> Self {
        Self { c: [Complex::new(f64::NAN, f64::NAN); 4] }
    }

    #[inline]
    pub fn sc(&self) -> Complex {
        self.c[0]
    }

    #[inline]
    pub fn vec(&self) -> [Complex; 3] {
        [self.c[1], self.c[2], self.c[3]]
    }

    pub fn vector_part(&self) -> Self {
        Self::new(C0, self.c[1], self.c[2], self.c[3])
    }

    /// Quaternionic conjugate `ā = a0 - a⃗`.
    pub fn conj(&self) -> Self {
        Self::new(self.c[0], -self.c[1], -self.c[2], -self.c[3])
    }

    /// Componentwise complex conjugation `a*`.
    pub fn complex_conj(&self) -> Self {
        Self { c: self.c.map(|z| z.conj()) }
    }

    /// `a ā = a0² + a1² + a2² + a3²`, complex valued (zero on zero divisors).
    pub fn norm(&self) -> Complex {
        self.c.iter().map(|z| z * z).sum()
    }

    /// `|a|_c² = Σ |a_k|²`.
    pub fn modulus_c_sq(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|a|_c = sqrt(Σ |a_k|²)`, finite and positive on zero divisors too.
    pub fn modulus_c(&self) -> f64 {
        self.modulus_c_sq().sqrt()
    }

    /// `a⁻¹ = ā / (a ā)`, defined whenever `a ā ≠ 0`.
    pub fn inverse(&self) -> Result<Self> {
        let norm = self.norm();
        let modulus_sq = self.modulus_c_sq();
        if modulus_sq == 0.0 || norm.norm() <= INVERSE_EPS * modulus_sq {
            return Err(Error::ZeroDivisorOrZero { norm: norm.norm(), modulus_sq });
        }
        Ok(self.conj() * norm.inv())
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn dist_c(&self, other: &Self) -> f64 {
        (*self - *other).modulus_c()
    }
}

impl Index<usize> for ComplexQuaternion {
    type Output = Complex;
    fn index(&self, k: usize) -> &Complex {
        &self.c[k]
    }
}

impl fmt::Debug for ComplexQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = self.c;
        write!(f, "({a0}) + ({a1})i1 + ({a2})i2 + ({a3})i3")
    }
}

impl fmt::Display for ComplexQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for ComplexQuaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self {
            c: [
                self.c[0] + rhs.c[0],
                self.c[1] + rhs.c[1],
                self.c[2] + rhs.c[2],
                self.c[3] + rhs.c[3],
            ],
        }
    }
}

impl Sub for ComplexQuaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self {
            c: [
                self.c[0] - rhs.c[0],
                self.c[1] - rhs.c[1],
                self.c[2] - rhs.c[2],
                self.c[3] - rhs.c[3],
            ],
        }
    }
}

impl AddAssign for ComplexQuaternion {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for ComplexQuaternion {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for ComplexQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c: self.c.map(|z| -z) }
    }
}

/// `a b = a0 b0 - <a⃗, b⃗> + a0 b⃗ + a⃗ b0 + [a⃗ × b⃗]`.
impl Mul for ComplexQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = b.c;
        Self {
            c: [
                a0 * b0 - (a1 * b1 + a2 * b2 + a3 * b3),
                a0 * b1 + a1 * b0 + (a2 * b3 - a3 * b2),
                a0 * b2 + a2 * b0 + (a3 * b1 - a1 * b3),
                a0 * b3 + a3 * b0 + (a1 * b2 - a2 * b1),
            ],
        }
    }
}

impl Mul<Complex> for ComplexQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: Complex) -> Self {
        Self { c: self.c.map(|z| z * s) }
    }
}

impl Mul<ComplexQuaternion> for Complex {
    type Output = ComplexQuaternion;
    #[inline]
    fn mul(self, q: ComplexQuaternion) -> ComplexQuaternion {
        q * self
    }
}

impl Mul<f64> for ComplexQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self { c: self.c.map(|z| z * s) }
    }
}

impl Mul<ComplexQuaternion> for f64 {
    type Output = ComplexQuaternion;
    #[inline]
    fn mul(self, q: ComplexQuaternion) -> ComplexQuaternion {
        q * self
    }
}

impl std::iter::Sum for ComplexQuaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

impl From<Complex64> for ComplexQuaternion {
    fn from(z: Complex64) -> Self {
        Self::scalar(z)
    }
}

pub fn cq_mul(a: ComplexQuaternion, b: ComplexQuaternion) -> ComplexQuaternion {
    a * b
}

pub fn cq_conj(a: ComplexQuaternion) -> ComplexQuaternion {
    a.conj()
}

pub fn cq_norm(a: ComplexQuaternion) -> Complex {
    a.norm()
}

pub fn cq_modulus_c(a: ComplexQuaternion) -> f64 {
    a.modulus_c()
}

pub fn cq_inverse(a: ComplexQuaternion) -> Result<ComplexQuaternion> {
    a.inverse()
}

/// Outcome of the zero-divisor test, with each equivalent criterion evaluated separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroDivisorReport {
    pub is_zero_divisor: bool,
    /// `|a ā| / |a|_c²`; zero exactly on the zero-divisor cone.
    pub margin: f64,
    /// `a ā = 0`
    pub norm_vanishes: bool,
    /// `a0² = a⃗²`
    pub scalar_square_matches: bool,
    /// `a² = 2 a0 a = 2 a⃗ a`
    pub square_law_holds: bool,
}

impl ZeroDivisorReport {
    pub fn criteria_agree(&self) -> bool {
        self.norm_vanishes == self.scalar_square_matches
            && self.norm_vanishes == self.square_law_holds
    }
}

pub fn is_zero_divisor(a: ComplexQuaternion) -> Result<ZeroDivisorReport> {
    is_zero_divisor_with_tol(a, ZERO_DIVISOR_TOL)
}

pub fn is_zero_divisor_with_tol(a: ComplexQuaternion, tol: f64) -> Result<ZeroDivisorReport> {
    let scale = a.modulus_c_sq();
    if scale == 0.0 {
        return Err(Error::ZeroInput);
    }
    let threshold = tol * scale;

    let margin = a.norm().norm() / scale;
    let norm_vanishes = a.norm().norm() <= threshold;

    let v = a.vector_part();
    let a0 = a.sc();
    let scalar_square_matches = (a0 * a0 - (v * v).sc()).norm() <= threshold
        && (v * v).vector_part().modulus_c() <= threshold;

    let sq = a * a;
    let square_law_holds = (sq - a * (a0 * 2.0)).modulus_c() <= threshold
        && (sq - (v * 2.0) * a).modulus_c() <= threshold;

    Ok(ZeroDivisorReport {
        is_zero_divisor: norm_vanishes,
        margin,
        norm_vanishes,
        scalar_square_matches,
        square_law_holds,
    })
}

/// The complementary right-multiplication projectors `P± = M^{(ν ± α⃗)} / (2ν)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorPair {
    pub plus: ComplexQuaternion,
    pub minus: ComplexQuaternion,
    pub nu: Complex,
}

impl ProjectorPair {
    /// `f P⁺`
    pub fn apply_plus(&self, f: ComplexQuaternion) -> ComplexQuaternion {
        f * self.plus
    }

    /// `f P⁻`
    pub fn apply_minus(&self, f: ComplexQuaternion) -> ComplexQuaternion {
        f * self.minus
    }
}

pub fn make_projectors(alpha: ComplexQuaternion) -> Result<ProjectorPair> {
    let nu = alpha_to_nu(alpha)?;
    if nu == C0 {
        return Err(Error::ZeroDivisorAlpha);
    }
    let half_inv = (nu * 2.0).inv();
    let nu_q = ComplexQuaternion::scalar(nu);
    Ok(ProjectorPair {
        plus: (nu_q + alpha) * half_inv,
        minus: (nu_q - alpha) * half_inv,
        nu,
    })
}
