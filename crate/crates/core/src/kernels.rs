//! Closed-form fundamental solutions, generated null-solution fields and
//! radiation-condition residuals.
//!
//! With `Im ν ≥ 0` the outgoing Helmholtz solution is
//! `θ_ν(x) = -e^{iν|x|} / (4π|x|)` and the fundamental solutions of `D ± ν` are
//!
//! ```text
//! K_{±ν}(x) = (±ν + x/|x|² - iν x/|x|) θ_ν(x),    x = x1 i1 + x2 i2 + x3 i3.
//! ```

use std::f64::consts::PI;

use crate::cqalg::{make_projectors, Complex, ComplexQuaternion, C0, CI};
use crate::error::{Error, Result};
use crate::field::{AnyField, QuatField};
use crate::gamma_spinor::{gamma, lift_a_inv, spinor_alpha, CMatrix4, Spinor4};
use crate::{norm3, sub3, Point};

type Q = ComplexQuaternion;

/// Kernels refuse to evaluate closer than this to their singularity.
pub const SINGULAR_RADIUS: f64 = 1e-8;

/// `|α⃗²| ≤ ZERO_DIVISOR_EPS |α⃗|_c²` puts `α⃗` on the zero-divisor cone (`ν = 0`).
pub const ZERO_DIVISOR_EPS: f64 = 1e-12;

/// Which parameter family a kernel or null field belongs to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelParams {
    /// Scalar wavenumber of `D + ν`.
    Nu(Complex),
    /// Pure-vector `α⃗` of `D + M^α`.
    Alpha(ComplexQuaternion),
    /// Frequency and mass of the time-harmonic Dirac operator; `α⃗ = -(iω i1 + m i2)`.
    SpinorWM { omega: f64, m: f64 },
}

impl KernelParams {
    /// The wavenumber; for `Alpha` / `SpinorWM` this is `√(α⃗²)` with `Im ν ≥ 0`.
    pub fn nu(&self) -> Result<Complex> {
        match *self {
            KernelParams::Nu(nu) => Ok(nu),
            KernelParams::Alpha(alpha) => alpha_to_nu(alpha),
            KernelParams::SpinorWM { omega, m } => alpha_to_nu(spinor_alpha(omega, m)),
        }
    }

    pub fn alpha(&self) -> Option<ComplexQuaternion> {
        match *self {
            KernelParams::Nu(_) => None,
            KernelParams::Alpha(alpha) => Some(alpha),
            KernelParams::SpinorWM { omega, m } => Some(spinor_alpha(omega, m)),
        }
    }

    pub fn is_zero_divisor(&self) -> Result<bool> {
        Ok(self.alpha().is_some() && self.nu()? == C0)
    }
}

/// Sign selecting `K_{+ν}` or `K_{-ν}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSign {
    Plus,
    Minus,
}

impl KernelSign {
    pub fn value(self) -> f64 {
        match self {
            KernelSign::Plus => 1.0,
            KernelSign::Minus => -1.0,
        }
    }
}

pub(crate) fn check_pure_vector(alpha: Q) -> Result<()> {
    let scalar = alpha.sc().norm();
    if scalar > 1e-14 * alpha.modulus_c().max(1.0) {
        return Err(Error::NotPureVector { scalar });
    }
    Ok(())
}

/// The root of `ν² = z` with `Im ν ≥ 0`, and `Re ν ≥ 0` when `ν` is real.
pub fn upper_sqrt(z: Complex) -> Complex {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

/// `ν = √(α⃗²)` on the upper branch; `0` on the zero-divisor cone.
pub fn alpha_to_nu(alpha: ComplexQuaternion) -> Result<Complex> {
    check_pure_vector(alpha)?;
    let sq = (alpha * alpha).sc();
    if sq.norm() <= ZERO_DIVISOR_EPS * alpha.modulus_c_sq() {
        return Ok(C0);
    }
    Ok(upper_sqrt(sq))
}

fn guard(x: Point) -> Result<f64> {
    let r = norm3(x);
    if r.is_nan() || r < SINGULAR_RADIUS {
        return Err(Error::SingularPoint { distance: r });
    }
    Ok(r)
}

fn theta_at(r: f64, nu: Complex) -> Complex {
    -(CI * nu * r).exp() / (4.0 * PI * r)
}

/// `θ_ν(x) = -e^{iν|x|} / (4π|x|)`.
pub fn theta(x: Point, nu: Complex) -> Result<Complex> {
    let r = guard(x)?;
    Ok(theta_at(r, nu))
}

/// `K_{±ν}(x) = (±ν + x/|x|² - iν x/|x|) θ_ν(x)`.
pub fn fund_k(x: Point, nu: Complex, sign: KernelSign) -> Result<ComplexQuaternion> {
    let r = guard(x)?;
    let th = theta_at(r, nu);
    let radial = Complex::new(1.0 / (r * r), 0.0) - CI * nu / r;
    let mut k = Q::from_point(x) * (radial * th);
    k.c[0] = sign.value() * nu * th;
    Ok(k)
}

/// The incoming fundamental solution of `D + ν`:
/// `(ν + x/|x|² + iν x/|x|) · (-e^{-iν|x|} / (4π|x|))`.
///
/// It solves the same equation as `K_ν` but violates the radiation condition.
pub fn fund_k_incoming(x: Point, nu: Complex) -> Result<ComplexQuaternion> {
    let r = guard(x)?;
    let u = -(-CI * nu * r).exp() / (4.0 * PI * r);
    let radial = Complex::new(1.0 / (r * r), 0.0) + CI * nu / r;
    let mut k = Q::from_point(x) * (radial * u);
    k.c[0] = nu * u;
    Ok(k)
}

fn check_zero_divisor(alpha: Q) -> Result<()> {
    check_pure_vector(alpha)?;
    let scale = alpha.modulus_c_sq();
    if scale == 0.0 {
        return Err(Error::ZeroInput);
    }
    let margin = (alpha * alpha).sc().norm() / scale;
    if margin > ZERO_DIVISOR_EPS {
        return Err(Error::NotZeroDivisor { margin });
    }
    Ok(())
}

/// `K_0(x) + θ_0(x) α⃗`, a fundamental solution of `D + M^α` when `α⃗² = 0`.
///
/// `D(K_0 + θ_0 α⃗) = δ - K_0 α⃗` and `(K_0 + θ_0 α⃗) α⃗ = K_0 α⃗` because `α⃗² = 0`,
/// so the two terms cancel away from the origin.
pub fn fund_e_zero_divisor(x: Point, alpha: ComplexQuaternion) -> Result<ComplexQuaternion> {
    check_zero_divisor(alpha)?;
    Ok(fund_k(x, C0, KernelSign::Plus)? + alpha * theta(x, C0)?)
}

/// Applies the `D + M^α` fundamental solution to a constant `c`:
/// `θ_ν(z) [(z/|z|² - iν z/|z|) c + c α⃗]`.
///
/// Valid for every pure-vector `α⃗`, including the zero-divisor cone.
pub fn alpha_kernel_apply(
    z: Point,
    nu: Complex,
    alpha: ComplexQuaternion,
    c: ComplexQuaternion,
) -> Result<ComplexQuaternion> {
    let r = guard(z)?;
    let th = theta_at(r, nu);
    let radial = Complex::new(1.0 / (r * r), 0.0) - CI * nu / r;
    Ok((Q::from_point(z) * radial * c + c * alpha) * th)
}

/// A point source of a generated null field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Source {
    pub position: Point,
    pub coefficient: ComplexQuaternion,
}

impl Source {
    pub fn new(position: Point, coefficient: ComplexQuaternion) -> Self {
        Self { position, coefficient }
    }
}

/// Superposition of fundamental solutions centred at `sources`; a null
/// solution of the operator selected by `params` away from the sources.
///
/// * `Nu`: `Σ K_ν(x - x0) c`, in the kernel of `D + ν`.
/// * `Alpha`, `ν ≠ 0`: `Σ K_ν(x - x0) c P⁺ + K_{-ν}(x - x0) c P⁻`, in the kernel of `D + M^α`.
/// * `Alpha`, `ν = 0`: `Σ K_0(x - x0) c + θ_0(x - x0) c α⃗`.
/// * `SpinorWM`: `A⁻¹` of the `Alpha` field, a spinor null solution of `𝔻_{ω,m}`.
///   Source positions refer to the quaternionic picture; the spinor field is
///   singular at their mirror images.
pub fn null_field(params: KernelParams, sources: &[Source]) -> Result<AnyField> {
    let sources = sources.to_vec();
    let positions: Vec<Point> = sources.iter().map(|s| s.position).collect();
    match params {
        KernelParams::Nu(nu) => {
            if nu.im < 0.0 {
                return Err(Error::KindMismatch(format!("Im nu must be >= 0, got {nu}")));
            }
            let field = QuatField::new(move |x| {
                sources
                    .iter()
                    .map(|s| match fund_k(sub3(x, s.position), nu, KernelSign::Plus) {
                        Ok(k) => k * s.coefficient,
                        Err(_) => Q::nan(),
                    })
                    .sum()
            });
            Ok(field.with_singularities(positions).into())
        }
        KernelParams::Alpha(alpha) => Ok(alpha_null_field(alpha, sources)?.into()),
        KernelParams::SpinorWM { omega, m } => {
            let f = alpha_null_field(spinor_alpha(omega, m), sources)?;
            Ok(lift_a_inv(&f).into())
        }
    }
}

fn alpha_null_field(alpha: Q, sources: Vec<Source>) -> Result<QuatField> {
    let nu = alpha_to_nu(alpha)?;
    let positions: Vec<Point> = sources.iter().map(|s| s.position).collect();
    let field = if nu == C0 {
        QuatField::new(move |x| {
            sources
                .iter()
                .map(|s| {
                    alpha_kernel_apply(sub3(x, s.position), C0, alpha, s.coefficient)
                        .unwrap_or_else(|_| Q::nan())
                })
                .sum()
        })
    } else {
        let p = make_projectors(alpha)?;
        QuatField::new(move |x| {
            sources
                .iter()
                .map(|s| {
                    let z = sub3(x, s.position);
                    match (fund_k(z, nu, KernelSign::Plus), fund_k(z, nu, KernelSign::Minus)) {
                        (Ok(kp), Ok(km)) => {
                            p.apply_plus(kp * s.coefficient) + p.apply_minus(km * s.coefficient)
                        }
                        _ => Q::nan(),
                    }
                })
                .sum()
        })
    };
    Ok(field.with_singularities(positions))
}

/// Radiation-condition families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiationKind {
    /// `(ν - x/|x|² + iν x/|x|) f`
    Rad,
    /// `(1 + i x/|x|) f`
    Mm,
    /// `ν f + (i x/|x|) f α⃗`
    Alpha,
    /// `ν q - (ωγ0 - m)(x_γ/|x|) q`
    Spinor,
}

/// `(ν - x/|x|² + iν x/|x|) f`
pub fn rad_expr(value: Q, x: Point, nu: Complex) -> Result<Q> {
    let r = guard(x)?;
    let radial = Complex::new(-1.0 / (r * r), 0.0) + CI * nu / r;
    let mut m = Q::from_point(x) * radial;
    m.c[0] = nu;
    Ok(m * value)
}

/// `(1 + i x/|x|) f`
pub fn mm_expr(value: Q, x: Point) -> Result<Q> {
    let r = guard(x)?;
    let mut m = Q::from_point(x) * (CI / r);
    m.c[0] = Complex::new(1.0, 0.0);
    Ok(m * value)
}

/// `ν f + (i x/|x|) f α⃗`
pub fn alpha_expr(value: Q, x: Point, nu: Complex, alpha: Q) -> Result<Q> {
    let r = guard(x)?;
    Ok(value * nu + Q::from_point(x) * (CI / r) * value * alpha)
}

/// `P⁺((1 + i x/|x|) f) + P⁻((1 - i x/|x|) f)`, which equals `alpha_expr / ν`.
pub fn alpha_projection_expr(value: Q, x: Point, alpha: Q) -> Result<Q> {
    let r = guard(x)?;
    let p = make_projectors(alpha)?;
    let ix = Q::from_point(x) * (CI / r);
    let plus = (Q::ONE + ix) * value;
    let minus = (Q::ONE - ix) * value;
    Ok(p.apply_plus(plus) + p.apply_minus(minus))
}

/// `Σ x_k γ_k`
pub fn x_gamma(x: Point) -> CMatrix4 {
    (gamma(1) * Complex::new(x[0], 0.0))
        + (gamma(2) * Complex::new(x[1], 0.0))
        + (gamma(3) * Complex::new(x[2], 0.0))
}

/// `ν q - (ωγ0 - m)(x_γ/|x|) q`
pub fn spinor_expr(value: Spinor4, x: Point, nu: Complex, omega: f64, m: f64) -> Result<Spinor4> {
    let r = guard(x)?;
    let mass = gamma(0) * Complex::new(omega, 0.0) - CMatrix4::identity() * Complex::new(m, 0.0);
    let dir = x_gamma(x) * Complex::new(1.0 / r, 0.0);
    Ok(value * nu - (mass * dir) * value)
}

/// Modulus of the radiation-condition expression of `kind` applied to `f` at `x`.
pub fn radiation_residual(
    kind: RadiationKind,
    f: &AnyField,
    x: Point,
    params: KernelParams,
) -> Result<f64> {
    let mismatch = |what: &str| Err(Error::KindMismatch(what.to_string()));
    match kind {
        RadiationKind::Rad => {
            let (Some(f), KernelParams::Nu(nu)) = (f.as_quaternion(), params) else {
                return mismatch("RAD needs a quaternion field and Nu parameters");
            };
            Ok(rad_expr(f.eval(x), x, nu)?.modulus_c())
        }
        RadiationKind::Mm => {
            let Some(f) = f.as_quaternion() else {
                return mismatch("MM needs a quaternion field");
            };
            Ok(mm_expr(f.eval(x), x)?.modulus_c())
        }
        RadiationKind::Alpha => {
            let (Some(f), Some(alpha)) = (f.as_quaternion(), params.alpha()) else {
                return mismatch("ALPHA needs a quaternion field and Alpha/SpinorWM parameters");
            };
            Ok(alpha_expr(f.eval(x), x, params.nu()?, alpha)?.modulus_c())
        }
        RadiationKind::Spinor => {
            let (Some(q), KernelParams::SpinorWM { omega, m }) = (f.as_spinor(), params) else {
                return mismatch("SPINOR needs a spinor field and SpinorWM parameters");
            };
            Ok(spinor_expr(q.eval(x), x, params.nu()?, omega, m)?.norm())
        }
    }
}

/// Least-squares slope of `log y` against `log r`.
pub fn loglog_slope(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let (sx, sy) = samples.iter().fold((0.0, 0.0), |(a, b), &(r, y)| (a + r.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = samples.iter().fold((0.0, 0.0), |(num, den), &(r, y)| {
        let dx = r.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}

/// Decay of `r · residual(r)` between consecutive radii, one decade apart.
#[derive(Clone, Debug, PartialEq)]
pub struct DecadeDecay {
    /// `(r, r · residual)` rows.
    pub scaled: Vec<(f64, f64)>,
    /// Ratio `scaled[k] / scaled[k + 1]` for each consecutive pair.
    pub ratios: Vec<f64>,
    pub passes: bool,
}

/// Required drop of `r · residual` per decade for an `o(1/|x|)` verdict.
pub const DECADE_FACTOR: f64 = 10.0;

/// Relative slack on [`DECADE_FACTOR`]. An exact `O(1/|x|²)` residual makes
/// `r · residual` drop by exactly 10, so the comparison needs a rounding margin.
pub const DECADE_FACTOR_RTOL: f64 = 1e-6;

/// `o(1/|x|)` proxy: `r · residual(r)` must drop by at least [`DECADE_FACTOR`]
/// per decade. `samples` are `(r, residual)` rows at radii one decade apart.
pub fn decade_decay(samples: &[(f64, f64)]) -> DecadeDecay {
    let scaled: Vec<(f64, f64)> = samples.iter().map(|&(r, res)| (r, r * res)).collect();
    let ratios: Vec<f64> = scaled.windows(2).map(|w| w[0].1 / w[1].1).collect();
    let passes = !ratios.is_empty()
        && ratios
            .iter()
            .all(|&q| q >= DECADE_FACTOR * (1.0 - DECADE_FACTOR_RTOL) || q.is_infinite());
    DecadeDecay { scaled, ratios, passes }
}
