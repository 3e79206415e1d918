//! Finite-difference Moisil-Theodoresco operators and Cauchy-type boundary
//! integral operators on closed surfaces.
//!
//! For a bounded domain `Ω` with outward normal `n⃗` the Cauchy operator is
//!
//! ```text
//! K_ν[f](x) = -∫_Γ K_ν(x - y) n⃗(y) f(y) dΓ_y
//! ```
//!
//! and reproduces null solutions of `D + ν` inside `Ω`; outside `Ω` a
//! radiating null solution satisfies `f = -K_ν[f]`. Normals are always
//! `Ω`-outward; the exterior sign lives in [`OperatorSide`].

use crate::cqalg::{make_projectors, Complex, ComplexQuaternion, C0};
use crate::error::{Error, Result};
use crate::fd;
use crate::field::{AnyField, QuatField};
use crate::gamma_spinor::{apply_a, apply_a_inv, spinor_alpha, Spinor4};
use crate::kernels::{
    alpha_kernel_apply, alpha_to_nu, check_pure_vector, fund_k, theta, KernelParams, KernelSign,
};
use crate::surface::{icosphere, surface_integrate, volume_integrate, BallGrid, SurfaceMesh};
use crate::{reflect_x3, sub3, Point};

type Q = ComplexQuaternion;

/// Targets closer to `Γ` than this many mesh sizes ([`SurfaceMesh::mesh_size`]) are rejected.
pub const NEAR_BOUNDARY_FACTOR: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FdOperator {
    /// `Σ i_k ∂_k f`
    D,
    /// `Σ ∂_k f i_k`
    DRight,
    /// `D f + ν f`
    DNu(Complex),
    /// `D f + f α⃗`
    DAlpha(ComplexQuaternion),
}

pub fn fd_apply(op: FdOperator, f: &QuatField, x: Point, h: f64) -> ComplexQuaternion {
    let eval = |y: Point| f.eval(y);
    let grad = fd::gradient(&eval, x, h);
    let left = || -> Q { (0..3).map(|k| Q::basis(k + 1) * grad[k]).sum() };
    match op {
        FdOperator::D => left(),
        FdOperator::DRight => (0..3).map(|k| grad[k] * Q::basis(k + 1)).sum(),
        FdOperator::DNu(nu) => left() + f.eval(x) * nu,
        FdOperator::DAlpha(alpha) => left() + f.eval(x) * alpha,
    }
}

/// `D` applied to a field, as a new field evaluated by central differences
/// with the default step.
pub fn d_field(f: &QuatField) -> QuatField {
    let inner = f.clone();
    QuatField::new(move |x| fd_apply(FdOperator::D, &inner, x, fd::default_step(x)))
        .with_singularities(f.singular_points().to_vec())
}

fn check_target(mesh: &SurfaceMesh, x: Point) -> Result<()> {
    let min = NEAR_BOUNDARY_FACTOR * mesh.mesh_size();
    let distance = mesh.distance_to(x);
    if distance < min {
        return Err(Error::TooCloseToBoundary { distance, min });
    }
    Ok(())
}

fn check_data<T>(mesh: &SurfaceMesh, g: &[T]) -> Result<()> {
    if g.len() != mesh.len() {
        return Err(Error::KindMismatch(format!(
            "boundary data has {} values for {} nodes",
            g.len(),
            mesh.len()
        )));
    }
    Ok(())
}

/// Samples a field at the quadrature nodes.
pub fn sample_boundary(mesh: &SurfaceMesh, f: &QuatField) -> Vec<ComplexQuaternion> {
    mesh.nodes.iter().map(|&y| f.eval(y)).collect()
}

pub fn sample_boundary_spinor(mesh: &SurfaceMesh, q: &crate::SpinorField) -> Vec<Spinor4> {
    mesh.nodes.iter().map(|&y| q.eval(y)).collect()
}

/// `-∫_Γ K_{±ν}(x - y) n⃗(y) g(y) dΓ_y`; the unchecked core of [`k_nu_op`].
fn cauchy_layer(
    mesh: &SurfaceMesh,
    g: &[Q],
    x: Point,
    nu: Complex,
    sign: KernelSign,
) -> Result<ComplexQuaternion> {
    // evaluate once up front so a singular node surfaces as an error
    let kernels: Vec<Q> = mesh
        .nodes
        .iter()
        .map(|&y| fund_k(sub3(x, y), nu, sign))
        .collect::<Result<_>>()?;
    Ok(-surface_integrate(mesh, |i| kernels[i] * mesh.normal(i) * g[i]))
}

/// `K_ν[g](x) = -∫_Γ K_ν(x - y) n⃗(y) g(y) dΓ_y`.
pub fn k_nu_op(mesh: &SurfaceMesh, g: &[ComplexQuaternion], x: Point, nu: Complex) -> Result<ComplexQuaternion> {
    check_data(mesh, g)?;
    check_target(mesh, x)?;
    cauchy_layer(mesh, g, x, nu, KernelSign::Plus)
}

/// `K_{-ν}[g](x)`, built on `K_{-ν} = -(D + ν) θ_ν` with the same `θ_ν` as [`k_nu_op`].
pub fn k_minus_nu_op(
    mesh: &SurfaceMesh,
    g: &[ComplexQuaternion],
    x: Point,
    nu: Complex,
) -> Result<ComplexQuaternion> {
    check_data(mesh, g)?;
    check_target(mesh, x)?;
    cauchy_layer(mesh, g, x, nu, KernelSign::Minus)
}

/// `V₀[g](x) = ∫_Γ θ₀(x - y) n⃗(y) g(y) dΓ_y`.
pub fn v0_op(mesh: &SurfaceMesh, g: &[ComplexQuaternion], x: Point) -> Result<ComplexQuaternion> {
    check_data(mesh, g)?;
    check_target(mesh, x)?;
    let th: Vec<Complex> =
        mesh.nodes.iter().map(|&y| theta(sub3(x, y), C0)).collect::<Result<_>>()?;
    Ok(surface_integrate(mesh, |i| mesh.normal(i) * g[i] * th[i]))
}

/// How [`k_alpha_op`] evaluates `K_α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRepresentation {
    /// `P⁺ K_ν + P⁻ K_{-ν}` for `ν ≠ 0`, `K_0 - M^α V_0` on the zero-divisor cone.
    Projection,
    /// Direct quadrature of
    /// `-θ_ν(x - y) [((x-y)/|x-y|² - iν(x-y)/|x-y|) n⃗ g + n⃗ g α⃗]`.
    ExplicitKernel,
}

/// The Cauchy-type operator `K_α` of `D + M^α`.
pub fn k_alpha_op(
    mesh: &SurfaceMesh,
    g: &[ComplexQuaternion],
    x: Point,
    alpha: ComplexQuaternion,
    representation: AlphaRepresentation,
) -> Result<ComplexQuaternion> {
    check_pure_vector(alpha)?;
    check_data(mesh, g)?;
    check_target(mesh, x)?;
    let nu = alpha_to_nu(alpha)?;
    match representation {
        AlphaRepresentation::Projection if nu == C0 => {
            let k0 = cauchy_layer(mesh, g, x, C0, KernelSign::Plus)?;
            let v0 = v0_op(mesh, g, x)?;
            Ok(k0 - v0 * alpha)
        }
        AlphaRepresentation::Projection => {
            let p = make_projectors(alpha)?;
            let plus = cauchy_layer(mesh, g, x, nu, KernelSign::Plus)?;
            let minus = cauchy_layer(mesh, g, x, nu, KernelSign::Minus)?;
            Ok(p.apply_plus(plus) + p.apply_minus(minus))
        }
        AlphaRepresentation::ExplicitKernel => {
            let terms: Vec<Q> = mesh
                .nodes
                .iter()
                .enumerate()
                .map(|(i, &y)| alpha_kernel_apply(sub3(x, y), nu, alpha, mesh.normal(i) * g[i]))
                .collect::<Result<_>>()?;
            Ok(-surface_integrate(mesh, |i| terms[i]))
        }
    }
}

/// `𝕂_{ω,m}[q](x) = A⁻¹ K_α A [q](x)` with `α⃗ = -(iω i1 + m i2)`.
///
/// `q` holds spinor values at the quadrature nodes. The mesh must be symmetric
/// under `x3 -> -x3`, so that the reflected surface coincides with `Γ`.
pub fn k_spinor_op(mesh: &SurfaceMesh, q: &[Spinor4], x: Point, omega: f64, m: f64) -> Result<Spinor4> {
    check_data(mesh, q)?;
    let mirror = mesh.reflection_permutation()?;
    let rho: Vec<Q> = mirror.iter().map(|&j| apply_a(q[j])).collect();
    let value = k_alpha_op(mesh, &rho, reflect_x3(x), spinor_alpha(omega, m), AlphaRepresentation::Projection)?;
    Ok(apply_a_inv(value))
}

/// Which domain a Cauchy reconstruction targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorSide {
    /// `f = K[f]` in `Ω`.
    Interior,
    /// `f = -K[f]` in `R³ \ Ω̄` for radiating `f`.
    Exterior,
}

impl OperatorSide {
    pub fn sign(self) -> f64 {
        match self {
            OperatorSide::Interior => 1.0,
            OperatorSide::Exterior => -1.0,
        }
    }
}

/// Relative errors use `max(|reference|_c, REL_FLOOR · data scale)` as denominator.
pub const REL_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionReport {
    pub target: Point,
    pub side: OperatorSide,
    pub reconstructed: [Complex; 4],
    pub reference: [Complex; 4],
    pub abs_error: f64,
    pub rel_error: f64,
    pub level: Option<u32>,
    pub params: KernelParams,
}

fn modulus4(v: &[Complex; 4]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl ReconstructionReport {
    fn new(
        target: Point,
        side: OperatorSide,
        reconstructed: [Complex; 4],
        reference: [Complex; 4],
        data_scale: f64,
        level: Option<u32>,
        params: KernelParams,
    ) -> Self {
        let diff: [Complex; 4] = std::array::from_fn(|k| reconstructed[k] - reference[k]);
        let abs_error = modulus4(&diff);
        let rel_error = abs_error / modulus4(&reference).max(REL_FLOOR * data_scale);
        Self { target, side, reconstructed, reference, abs_error, rel_error, level, params }
    }
}

/// Reconstructs `field` at `x` from its boundary values and compares with
/// direct evaluation.
///
/// `Nu` uses `K_ν`, `Alpha` uses `K_α` (projection form), `SpinorWM` uses
/// `𝕂_{ω,m}` and requires a spinor field.
pub fn reconstruct(
    side: OperatorSide,
    params: KernelParams,
    mesh: &SurfaceMesh,
    field: &AnyField,
    x: Point,
) -> Result<ReconstructionReport> {
    let sign = side.sign();
    let (rec, reference, scale) = match (params, field) {
        (KernelParams::Nu(nu), AnyField::Quaternion(f)) => {
            let g = sample_boundary(mesh, f);
            let rec = k_nu_op(mesh, &g, x, nu)? * sign;
            (rec.c, f.eval(x).c, data_scale(&g))
        }
        (KernelParams::Alpha(alpha), AnyField::Quaternion(f)) => {
            let g = sample_boundary(mesh, f);
            let rec = k_alpha_op(mesh, &g, x, alpha, AlphaRepresentation::Projection)? * sign;
            (rec.c, f.eval(x).c, data_scale(&g))
        }
        (KernelParams::SpinorWM { omega, m }, AnyField::Spinor(q)) => {
            let data = sample_boundary_spinor(mesh, q);
            let rec = k_spinor_op(mesh, &data, x, omega, m)? * sign;
            let scale = data.iter().map(Spinor4::norm).fold(0.0, f64::max);
            (rec.c, q.eval(x).c, scale)
        }
        _ => return Err(Error::KindMismatch("parameters do not match the field type".into())),
    };
    Ok(ReconstructionReport::new(x, side, rec, reference, scale, mesh.level, params))
}

fn data_scale(g: &[Q]) -> f64 {
    g.iter().map(Q::modulus_c).fold(0.0, f64::max)
}

/// Both sides of the quaternionic Stokes formula
/// `∫_Ω ((D_r f) g + f (D g)) dy = ∫_Γ f n⃗ g dΓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesReport {
    pub volume_side: ComplexQuaternion,
    pub surface_side: ComplexQuaternion,
    pub residual: f64,
    /// `∫_Γ |f|_c |g|_c dΓ`, the natural size of either side.
    pub scale: f64,
}

impl StokesReport {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

/// Stokes identity check; derivatives by central differences with step `h`
/// (default `1e-3 (1 + |x|)` when `None`).
pub fn stokes_residual(
    grid: &BallGrid,
    mesh: &SurfaceMesh,
    f: &QuatField,
    g: &QuatField,
    h: Option<f64>,
) -> StokesReport {
    let step = |x: Point| h.unwrap_or_else(|| fd::default_step(x));
    let volume_side = volume_integrate(grid, |y| {
        let h = step(y);
        fd_apply(FdOperator::DRight, f, y, h) * g.eval(y) + f.eval(y) * fd_apply(FdOperator::D, g, y, h)
    });
    let surface_side =
        surface_integrate(mesh, |i| f.eval(mesh.nodes[i]) * mesh.normal(i) * g.eval(mesh.nodes[i]));
    let scale = crate::surface::surface_integrate_real(mesh, |i| {
        f.eval(mesh.nodes[i]).modulus_c() * g.eval(mesh.nodes[i]).modulus_c()
    });
    StokesReport { volume_side, surface_side, residual: volume_side.dist_c(&surface_side), scale }
}

/// Squared surface norms `∫_{|x|=R} |f|_c² dΓ` over a list of radii.
#[derive(Clone, Debug, PartialEq)]
pub struct L2Scan {
    /// `(R, ∫_{|x|=R} |f|_c² dΓ)`
    pub rows: Vec<(f64, f64)>,
    pub max_min_ratio: f64,
    pub strictly_decreasing: bool,
    /// Log-log slope of the squared norm against `R`.
    pub growth_exponent: f64,
}

pub fn l2_growth_scan(f: &QuatField, radii: &[f64], level: u32) -> L2Scan {
    let rows: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let mesh = icosphere(r, level, [0.0; 3]);
            (r, crate::surface::surface_l2_c_norm_sq(&mesh, f))
        })
        .collect();
    let max = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let strictly_decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    L2Scan {
        growth_exponent: crate::kernels::loglog_slope(&rows),
        max_min_ratio: max / min,
        strictly_decreasing,
        rows,
    }
}

/// `∫_{|y|=R} K_ν(x - y) (y/|y|) f(y) dΓ_y`, the contribution of the far sphere
/// when the Cauchy formula is applied on `B^R \ Ω̄`.
pub fn truncation_integral(
    f: &QuatField,
    x: Point,
    nu: Complex,
    radius: f64,
    level: u32,
) -> Result<ComplexQuaternion> {
    let sphere = icosphere(radius, level, [0.0; 3]);
    check_target(&sphere, x)?;
    let kernels: Vec<Q> = sphere
        .nodes
        .iter()
        .map(|&y| fund_k(sub3(x, y), nu, KernelSign::Plus))
        .collect::<Result<_>>()?;
    Ok(surface_integrate(&sphere, |i| kernels[i] * sphere.normal(i) * f.eval(sphere.nodes[i])))
}

/// `(R, level, |truncation integral|_c)` rows.
///
/// The mesh on each sphere keeps the physical spacing of the first one: the
/// level grows by one each time the radius doubles.
pub fn truncation_scan(
    f: &QuatField,
    x: Point,
    nu: Complex,
    radii: &[f64],
    base_level: u32,
) -> Result<Vec<(f64, u32, f64)>> {
    let Some(&r0) = radii.first() else { return Ok(Vec::new()) };
    radii
        .iter()
        .map(|&r| {
            let level = base_level + (r / r0).log2().round().max(0.0) as u32;
            Ok((r, level, truncation_integral(f, x, nu, r, level)?.modulus_c()))
        })
        .collect()
}

/// Observed orders `log(e_k / e_{k+1}) / log(h_k / h_{k+1})` from `(h, error)` rows.
pub fn observed_orders(rows: &[(f64, f64)]) -> Vec<f64> {
    rows.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{null_field, Source};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn d_of_position_is_minus_three() {
        let f = QuatField::new(Q::from_point);
        let v = fd_apply(FdOperator::D, &f, [0.3, -0.2, 0.7], 1e-3);
        assert!(v.dist_c(&Q::scalar(c(-3.0, 0.0))) < 1e-10);
        let v = fd_apply(FdOperator::DRight, &f, [0.3, -0.2, 0.7], 1e-3);
        assert!(v.dist_c(&Q::scalar(c(-3.0, 0.0))) < 1e-10);
    }

    #[test]
    fn constant_field_operators() {
        let k = Q::new(c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5));
        let f = QuatField::constant(k);
        let x = [0.1, 0.2, 0.3];
        assert!(fd_apply(FdOperator::D, &f, x, 1e-3).modulus_c() < 1e-15);
        let nu = c(1.5, 0.2);
        assert!(fd_apply(FdOperator::DNu(nu), &f, x, 1e-3).dist_c(&(k * nu)) < 1e-15);
        let alpha = spinor_alpha(2.0, 1.0);
        assert!(fd_apply(FdOperator::DAlpha(alpha), &f, x, 1e-3).dist_c(&(k * alpha)) < 1e-15);
    }

    #[test]
    fn zero_data_gives_zero() {
        let mesh = icosphere(1.0, 2, [0.0; 3]);
        let g = vec![Q::ZERO; mesh.len()];
        assert_eq!(k_nu_op(&mesh, &g, [0.0; 3], c(1.0, 0.0)).unwrap(), Q::ZERO);
        assert_eq!(v0_op(&mesh, &g, [0.0; 3]).unwrap(), Q::ZERO);
        let q = vec![Spinor4::ZERO; mesh.len()];
        assert_eq!(k_spinor_op(&mesh, &q, [0.0, 0.0, 2.0], 2.0, 1.0).unwrap(), Spinor4::ZERO);
    }

    #[test]
    fn v0_of_constant_at_centre_vanishes() {
        let mesh = icosphere(1.0, 3, [0.0; 3]);
        let g = vec![Q::ONE; mesh.len()];
        assert!(v0_op(&mesh, &g, [0.0; 3]).unwrap().modulus_c() < 1e-14);
    }

    #[test]
    fn guards() {
        let mesh = icosphere(1.0, 3, [0.0; 3]);
        let g = vec![Q::ONE; mesh.len()];
        assert!(matches!(
            k_nu_op(&mesh, &g, [0.0, 0.0, 1.01], c(1.0, 0.0)),
            Err(Error::TooCloseToBoundary { .. })
        ));
        assert!(matches!(
            k_nu_op(&mesh, &g[1..], [0.0; 3], c(1.0, 0.0)),
            Err(Error::KindMismatch(_))
        ));
        let shifted = icosphere(1.0, 2, [0.0, 0.0, 0.2]);
        let q = vec![Spinor4::ZERO; shifted.len()];
        assert!(matches!(
            k_spinor_op(&shifted, &q, [0.0, 0.0, 3.0], 2.0, 1.0),
            Err(Error::DomainNotReflectionSymmetric { .. })
        ));
    }

    #[test]
    fn interior_reconstruction_level3() {
        let mesh = icosphere(1.0, 3, [0.0; 3]);
        let nu = c(1.0, 0.0);
        let f = null_field(KernelParams::Nu(nu), &[Source::new([0.0, 0.0, 3.0], Q::ONE)]).unwrap();
        let r = reconstruct(OperatorSide::Interior, KernelParams::Nu(nu), &mesh, &f, [0.0; 3]).unwrap();
        assert!(r.rel_error < 1e-3, "{}", r.rel_error);
    }

    #[test]
    fn orders_from_halving() {
        let rows = [(0.4, 1.6e-2), (0.2, 4e-3), (0.1, 1e-3)];
        for p in observed_orders(&rows) {
            assert!((p - 2.0).abs() < 1e-12);
        }
    }
}
