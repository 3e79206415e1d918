//! One runner per subcommand. Each returns a [`Report`]; nothing here touches the filesystem.

use qdirac::boundary_ops::{
    l2_growth_scan, observed_orders, reconstruct, stokes_residual, OperatorSide, NEAR_BOUNDARY_FACTOR,
};
use qdirac::cqalg::{is_zero_divisor, make_projectors};
use qdirac::gamma_spinor::{
    a_inv_matrix, a_matrix, apply_a, apply_a_inv, conjugate_by_a, gamma, gamma123, lift_a,
};
use qdirac::kernels::{
    decade_decay, fund_k_incoming, null_field, radiation_residual, RadiationKind, Source, DECADE_FACTOR,
    DECADE_FACTOR_RTOL,
};
use qdirac::surface::{icosphere, shell_grid};
use qdirac::{
    AnyField, CMatrix4, Complex, ComplexQuaternion as Q, KernelParams, Point, QuatField, Spinor4,
    SurfaceMesh,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::ScenarioConfig;
use crate::report::{ConvergenceRow, Report, Status};
use crate::RunError;

pub const ANCHOR_ALGEBRA: &str = "complex quaternion algebra";
pub const ANCHOR_GAMMA: &str = "Dirac-Pauli representation";
pub const ANCHOR_TRANSFORM: &str = "spinor-quaternion transform";
pub const ANCHOR_PROJECTORS: &str = "projectors P+-";
pub const ANCHOR_INTERIOR: &str = "interior Cauchy formula";
pub const ANCHOR_EXTERIOR: &str = "exterior Cauchy formula";
pub const ANCHOR_SPINOR: &str = "spinor exterior Cauchy formula";
pub const ANCHOR_RADIATION: &str = "radiation condition";
pub const ANCHOR_STOKES: &str = "Stokes formula";
pub const ANCHOR_L2: &str = "surface L2 boundedness";

const DEFAULT_RELATIVE_ERROR: f64 = 1e-3;

pub struct Context {
    pub cfg: ScenarioConfig,
    pub seed: u64,
}

impl Context {
    fn report(&self, subcommand: &str) -> Report {
        Report::new(subcommand, self.cfg.scenario.clone(), self.seed)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn random_q(rng: &mut impl Rng) -> Q {
    Q { c: std::array::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))) }
}

fn scaled(p: Point, s: f64) -> Point {
    [p[0] * s, p[1] * s, p[2] * s]
}

fn norm(p: Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn verify_algebra(ctx: &Context) -> Result<Report, RunError> {
    let mut report = ctx.report("verify-algebra");
    let tol = ctx.cfg.tolerances.algebra.unwrap_or(1e-12);
    let samples = ctx.cfg.samples.unwrap_or(10_000);
    let mut rng = ctx.rng();
    let (mut conj, mut mult, mut inv, mut pair, mut inter, mut proj) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut disagreements = 0usize;
    let g123 = gamma123();
    for _ in 0..samples {
        let a = random_q(&mut rng);
        let b = random_q(&mut rng);
        let scale = a.modulus_c() * b.modulus_c();
        conj = conj.max((a * b).conj().dist_c(&(b.conj() * a.conj())) / scale);
        mult = mult.max(((a * b).norm() - a.norm() * b.norm()).norm() / (scale * scale));
        match a.inverse() {
            Ok(ai) => inv = inv.max((a * ai).dist_c(&Q::ONE)).max((ai * a).dist_c(&Q::ONE)),
            Err(_) => disagreements += 1,
        }

        let u: Point = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let u = scaled(u, 1.0 / norm(u));
        let z = (Q::ONE + Q::from_point(u) * c(0.0, 1.0)) * a.c[0];
        for (q, expected) in [(z, true), (a, false)] {
            let r = is_zero_divisor(q)?;
            if r.is_zero_divisor != expected || !r.criteria_agree() {
                disagreements += 1;
            }
        }

        let phi = Spinor4::new(b.c);
        pair = pair.max(apply_a_inv(apply_a(phi)).dist(&phi)).max(apply_a(apply_a_inv(a)).dist_c(&a));
        inter = worst([
            inter,
            conjugate_by_a(g123 * gamma(1), b).dist_c(&(Q::I1 * b)),
            conjugate_by_a(g123 * gamma(2), b).dist_c(&(Q::I2 * b)),
            conjugate_by_a(g123 * gamma(3), b).dist_c(&(-(Q::I3 * b))),
            conjugate_by_a(g123 * gamma(0), b).dist_c(&(b * Q::I1)),
            conjugate_by_a(g123, b).dist_c(&(-(b * Q::I2) * c(0.0, 1.0))),
        ]);

        let alpha = a.vector_part();
        if let Ok(p) = make_projectors(alpha) {
            let f = b;
            let (fp, fm) = (p.apply_plus(f), p.apply_minus(f));
            let s = f.modulus_c() * (1.0 + p.plus.modulus_c() + p.minus.modulus_c()).powi(2);
            proj = worst([
                proj,
                (fp + fm).dist_c(&f) / s,
                p.apply_plus(fp).dist_c(&fp) / s,
                p.apply_minus(fp).modulus_c() / s,
                (f * alpha).dist_c(&(fp * p.nu - fm * p.nu)) / s,
            ]);
        }
    }

    let e = CMatrix4::identity();
    let idx = [0, 1, 2, 3, 5];
    let mut gam = worst([(gamma(0) * gamma(0) - e).max_abs(), (gamma(5) * gamma(5) - e).max_abs()]);
    for k in 1..4 {
        gam = gam.max((gamma(k) * gamma(k) + e).max_abs());
    }
    for (n, &j) in idx.iter().enumerate() {
        for &k in &idx[n + 1..] {
            gam = gam.max((gamma(j) * gamma(k) + gamma(k) * gamma(j)).max_abs());
        }
    }
    pair = pair
        .max((a_matrix() * a_inv_matrix() - e).max_abs())
        .max((a_inv_matrix() * a_matrix() - e).max_abs());

    report.at_most("conjugation reverses products", ANCHOR_ALGEBRA, conj, tol);
    report.at_most("norm is multiplicative", ANCHOR_ALGEBRA, mult, tol);
    report.at_most("inverse law", ANCHOR_ALGEBRA, inv, tol);
    report.at_most("zero-divisor criteria disagreements", ANCHOR_ALGEBRA, disagreements as f64, 0.0);
    report.at_most("projector laws", ANCHOR_PROJECTORS, proj, tol);
    report.at_most("gamma matrix relations", ANCHOR_GAMMA, gam, tol);
    report.at_most("A and A^-1 are mutually inverse", ANCHOR_TRANSFORM, pair, tol);
    report.at_most("intertwining identities", ANCHOR_TRANSFORM, inter, tol);
    Ok(report)
}

/// Keeps the targets on the requested side of `mesh` and clear of the surface and
/// the field singularities; the rest are dropped with a warning.
fn usable_targets(
    report: &mut Report,
    mesh: &SurfaceMesh,
    field: &AnyField,
    targets: Vec<Point>,
    side: OperatorSide,
) -> Result<Vec<Point>, RunError> {
    let min = NEAR_BOUNDARY_FACTOR * mesh.mesh_size();
    let mut kept = Vec::new();
    for x in targets {
        let inside = mesh.contains(x);
        let wrong_side = match side {
            OperatorSide::Interior => !inside,
            OperatorSide::Exterior => inside,
        };
        let singular = field.singular_points().iter().any(|&p| norm([x[0] - p[0], x[1] - p[1], x[2] - p[2]]) < 1e-6);
        if wrong_side {
            report.warn(format!("target {x:?} lies on the wrong side of the surface; skipped"));
        } else if mesh.distance_to(x) < min {
            report.warn(format!("target {x:?} is closer than {min:.3e} to the surface; skipped"));
        } else if singular {
            report.warn(format!("target {x:?} coincides with a source; skipped"));
        } else {
            kept.push(x);
        }
    }
    if kept.is_empty() {
        return Err(RunError::ConfigInvalid("no usable targets".into()));
    }
    Ok(kept)
}

fn check_sources(report: &mut Report, mesh: &SurfaceMesh, sources: &[Source], side: OperatorSide) {
    for s in sources {
        let inside = mesh.contains(s.position);
        let misplaced = match side {
            OperatorSide::Interior => inside,
            OperatorSide::Exterior => !inside,
        };
        if misplaced {
            report.warn(format!(
                "source at {:?} is on the reconstruction side; the field is not a null solution there",
                s.position
            ));
        }
    }
}

struct CauchyDefaults {
    name: &'static str,
    anchor: &'static str,
    side: OperatorSide,
    params: KernelParams,
    sources: Vec<Source>,
    targets: Vec<Point>,
}

fn exterior_targets() -> Vec<Point> {
    let dirs: [Point; 3] = [[0.0, 0.0, 1.0], [0.6, -0.48, 0.64], [-0.36, 0.48, -0.8]];
    [1.5, 2.0, 3.0].iter().flat_map(|&r| dirs.iter().map(move |&d| scaled(d, r))).collect()
}

fn cauchy(ctx: &Context, d: CauchyDefaults) -> Result<Report, RunError> {
    let mut report = ctx.report(d.name);
    let cfg = &ctx.cfg;
    let params = cfg.params_or(d.params)?;
    if d.anchor == ANCHOR_SPINOR && !matches!(params, KernelParams::SpinorWM { .. }) {
        return Err(RunError::ConfigInvalid("spinor-exterior needs params.omega and params.m".into()));
    }
    let mesh = cfg.mesh(4)?;
    let sources = cfg.sources_or(d.sources);
    if sources.is_empty() {
        return Err(RunError::ConfigInvalid("at least one source is needed".into()));
    }
    check_sources(&mut report, &mesh, &sources, d.side);
    let field = null_field(params, &sources)?;
    let targets = usable_targets(&mut report, &mesh, &field, cfg.targets_or(d.targets), d.side)?;
    let tol = cfg.tolerances.relative_error.unwrap_or(DEFAULT_RELATIVE_ERROR);
    for x in targets {
        let r = reconstruct(d.side, params, &mesh, &field, x)?;
        report.at_most(format!("relative error at {x:?}"), d.anchor, r.rel_error, tol);
    }
    Ok(report)
}

pub fn cauchy_interior(ctx: &Context) -> Result<Report, RunError> {
    cauchy(
        ctx,
        CauchyDefaults {
            name: "cauchy-interior",
            anchor: ANCHOR_INTERIOR,
            side: OperatorSide::Interior,
            params: KernelParams::Nu(c(1.0, 0.0)),
            sources: vec![Source::new([0.0, 0.0, 3.0], Q::ONE)],
            targets: vec![[0.0; 3], [0.3, 0.0, 0.0], [0.0, -0.4, 0.2], [0.5, 0.2, 0.0]],
        },
    )
}

pub fn cauchy_exterior(ctx: &Context) -> Result<Report, RunError> {
    cauchy(
        ctx,
        CauchyDefaults {
            name: "cauchy-exterior",
            anchor: ANCHOR_EXTERIOR,
            side: OperatorSide::Exterior,
            params: KernelParams::Nu(c(1.0, 0.0)),
            sources: vec![Source::new([0.0; 3], Q::ONE)],
            targets: exterior_targets(),
        },
    )
}

pub fn spinor_exterior(ctx: &Context) -> Result<Report, RunError> {
    let mut report = cauchy(
        ctx,
        CauchyDefaults {
            name: "spinor-exterior",
            anchor: ANCHOR_SPINOR,
            side: OperatorSide::Exterior,
            params: KernelParams::SpinorWM { omega: 2.0, m: 1.0 },
            sources: spinor_sources(),
            targets: exterior_targets(),
        },
    )?;
    let cfg = &ctx.cfg;
    let params = cfg.params_or(KernelParams::SpinorWM { omega: 2.0, m: 1.0 })?;
    let field = null_field(params, &cfg.sources_or(spinor_sources()))?;
    let dir = direction(cfg, [0.6, 0.0, -0.8]);
    classify(&mut report, "spinor null field", &field, RadiationKind::Spinor, params, &decade_radii(cfg)?, dir, decade_factor(cfg), Some(true))?;
    Ok(report)
}

fn spinor_sources() -> Vec<Source> {
    let coeff = Q::new(c(0.5, 0.0), c(0.1, -0.3), c(0.0, 0.8), c(0.4, 0.2));
    vec![Source::new([0.1, -0.1, 0.2], coeff)]
}

fn decade_factor(cfg: &ScenarioConfig) -> f64 {
    cfg.tolerances.decade_factor.unwrap_or(DECADE_FACTOR)
}

fn decade_radii(cfg: &ScenarioConfig) -> Result<Vec<f64>, RunError> {
    let radii = cfg.radii_or(&[10.0, 100.0, 1000.0]);
    if radii.windows(2).any(|w| ((w[1] / w[0]) - 10.0).abs() > 1e-9) {
        return Err(RunError::ConfigInvalid("radiation radii must be one decade apart".into()));
    }
    Ok(radii)
}

fn direction(cfg: &ScenarioConfig, default: Point) -> Point {
    let d = cfg.targets.as_ref().and_then(|t| t.first().copied()).unwrap_or(default);
    scaled(d, 1.0 / norm(d))
}

/// Adds a radiating / non-radiating row for `field`, and a pass/fail row when the
/// classification is expected one way.
#[allow(clippy::too_many_arguments)]
fn classify(
    report: &mut Report,
    name: &str,
    field: &AnyField,
    kind: RadiationKind,
    params: KernelParams,
    radii: &[f64],
    dir: Point,
    factor: f64,
    expect_radiating: Option<bool>,
) -> Result<(), RunError> {
    let samples: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| Ok((r, radiation_residual(kind, field, scaled(dir, r), params)?)))
        .collect::<Result<_, qdirac::Error>>()?;
    let decay = decade_decay(&samples);
    let min_ratio = decay.ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let radiating = min_ratio >= factor * (1.0 - DECADE_FACTOR_RTOL);
    let status = if radiating { Status::Radiating } else { Status::NonRadiating };
    report.push(format!("{name}: r*residual drop per decade"), ANCHOR_RADIATION, min_ratio, factor, status);
    if let Some(expected) = expect_radiating {
        let label = if expected { "radiating" } else { "non-radiating" };
        report.push(
            format!("{name}: classified {label}"),
            ANCHOR_RADIATION,
            min_ratio,
            factor,
            Status::from_bool(radiating == expected),
        );
    }
    Ok(())
}

pub fn radiation_scan(ctx: &Context) -> Result<Report, RunError> {
    let mut report = ctx.report("radiation-scan");
    let cfg = &ctx.cfg;
    let params = cfg.params_or(KernelParams::Nu(c(1.0, 0.0)))?;
    let sources = cfg.sources_or(vec![Source::new([0.0; 3], Q::ONE)]);
    if sources.is_empty() {
        return Err(RunError::ConfigInvalid("at least one source is needed".into()));
    }
    let radii = decade_radii(cfg)?;
    let dir = direction(cfg, [0.48, -0.6, 0.64]);
    let factor = decade_factor(cfg);
    let field = null_field(params, &sources)?;
    let zero_divisor = params.is_zero_divisor()?;
    if zero_divisor {
        report.warn("alpha is a zero divisor (nu = 0); the classification is informational");
    }
    let expect = (!zero_divisor).then_some(true);
    match params {
        KernelParams::Nu(nu) => {
            classify(&mut report, "outgoing null field", &field, RadiationKind::Rad, params, &radii, dir, factor, expect)?;
            let incoming: AnyField = QuatField::new(move |x| fund_k_incoming(x, nu).unwrap_or_else(|_| Q::nan())).into();
            let expect_incoming = (nu.im == 0.0 && nu.re != 0.0).then_some(false);
            classify(&mut report, "incoming kernel", &incoming, RadiationKind::Rad, params, &radii, dir, factor, expect_incoming)?;
        }
        KernelParams::Alpha(_) => {
            classify(&mut report, "outgoing null field", &field, RadiationKind::Alpha, params, &radii, dir, factor, expect)?;
        }
        KernelParams::SpinorWM { .. } => {
            classify(&mut report, "outgoing null field", &field, RadiationKind::Spinor, params, &radii, dir, factor, expect)?;
        }
    }
    Ok(report)
}

fn random_polynomial_field(rng: &mut impl Rng) -> QuatField {
    // total degree 2: 1, x, y, z, x², y², z², xy, yz, zx
    let coeffs: Vec<Q> = (0..10).map(|_| random_q(rng)).collect();
    QuatField::new(move |x: Point| {
        let m = [
            1.0,
            x[0],
            x[1],
            x[2],
            x[0] * x[0],
            x[1] * x[1],
            x[2] * x[2],
            x[0] * x[1],
            x[1] * x[2],
            x[2] * x[0],
        ];
        m.iter().zip(&coeffs).map(|(&v, &q)| q * v).sum()
    })
}

pub fn stokes_check(ctx: &Context) -> Result<Report, RunError> {
    let mut report = ctx.report("stokes-check");
    let cfg = &ctx.cfg;
    if cfg.geometry.mesh.is_some() || cfg.geometry.center.is_some_and(|c| c != [0.0; 3]) {
        return Err(RunError::ConfigInvalid("stokes-check needs a sphere centred at the origin".into()));
    }
    let radius = cfg.geometry.radius.unwrap_or(1.0);
    let mesh = cfg.mesh(4)?;
    let spacing = cfg.spacing.unwrap_or(0.05) * radius;
    let grid = shell_grid(radius, None, spacing);
    let tol = cfg.tolerances.stokes.unwrap_or(1e-2);

    let one = QuatField::constant(Q::ONE);
    let x1 = QuatField::new(|x: Point| Q::from_real([x[0], 0.0, 0.0, 0.0]));
    let basic = stokes_residual(&grid, &mesh, &one, &x1, None);
    report.at_most("f = 1, g = x1", ANCHOR_STOKES, basic.relative(), tol);

    let mut rng = ctx.rng();
    for k in 0..cfg.samples.unwrap_or(4) {
        let f = random_polynomial_field(&mut rng);
        let g = random_polynomial_field(&mut rng);
        let r = stokes_residual(&grid, &mesh, &f, &g, None);
        report.at_most(format!("random quadratic pair {k}"), ANCHOR_STOKES, r.relative(), tol);
    }
    Ok(report)
}

pub fn l2_scan(ctx: &Context) -> Result<Report, RunError> {
    let mut report = ctx.report("l2-scan");
    let cfg = &ctx.cfg;
    let params = cfg.params_or(KernelParams::Nu(c(2.0, 0.0)))?;
    let sources = cfg.sources_or(vec![Source::new([0.0; 3], Q::ONE)]);
    let radii = cfg.radii_or(&[2.0, 4.0, 8.0, 16.0]);
    let level = cfg.geometry.level.unwrap_or(3);
    let reach = sources.iter().map(|s| norm(s.position)).fold(0.0, f64::max);
    if reach >= 0.5 * radii[0] {
        return Err(RunError::ConfigInvalid("sources must lie well inside the smallest sphere".into()));
    }
    let field = match null_field(params, &sources)? {
        AnyField::Quaternion(f) => f,
        AnyField::Spinor(q) => lift_a(&q),
    };
    let nu = params.nu()?;
    let scan = l2_growth_scan(&field, &radii, level);
    if nu.im > 0.0 {
        report.push(
            "null field: squared norm strictly decreasing",
            ANCHOR_L2,
            scan.max_min_ratio,
            1.0,
            Status::from_bool(scan.strictly_decreasing),
        );
    } else {
        report.at_most("null field: max/min squared norm", ANCHOR_L2, scan.max_min_ratio, cfg.tolerances.l2_ratio.unwrap_or(1.1));
    }

    let counterexample = QuatField::new(|x: Point| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        (Q::ONE - Q::from_point(x) * c(0.0, 1.0 / r2.sqrt())) * r2
    });
    let growth = l2_growth_scan(&counterexample, &radii, level);
    report.at_least("MM counterexample: growth exponent", ANCHOR_L2, growth.growth_exponent, 4.0);
    Ok(report)
}

pub fn convergence(ctx: &Context, max_level: Option<u32>) -> Result<Report, RunError> {
    let mut report = ctx.report("convergence");
    let cfg = &ctx.cfg;
    if cfg.geometry.mesh.is_some() {
        return Err(RunError::ConfigInvalid("convergence refines icospheres; geometry.mesh is not allowed".into()));
    }
    let levels = match (&cfg.levels, max_level) {
        (Some(l), _) => l.clone(),
        (None, Some(top)) if top >= 3 => (2..=top).collect(),
        (None, Some(_)) => return Err(RunError::ConfigInvalid("--level must be at least 3 for convergence".into())),
        (None, None) => vec![2, 3, 4],
    };
    let params = cfg.params_or(KernelParams::Nu(c(1.0, 0.5)))?;
    let sources = cfg.sources_or(vec![Source::new([0.0, 3.0, 0.0], Q::ONE + Q::I2)]);
    let field = null_field(params, &sources)?;
    let x = cfg.targets.as_ref().map(|t| t[0]).unwrap_or([0.02, -0.03, 0.05]);
    let (radius, center) = (cfg.geometry.radius.unwrap_or(1.0), cfg.geometry.center.unwrap_or([0.0; 3]));

    let mut rows = Vec::new();
    for &level in &levels {
        let mesh = icosphere(radius, level, center);
        if level == levels[0] {
            check_sources(&mut report, &mesh, &sources, OperatorSide::Interior);
            usable_targets(&mut report, &mesh, &field, vec![x], OperatorSide::Interior)?;
        }
        let r = reconstruct(OperatorSide::Interior, params, &mesh, &field, x)?;
        rows.push((level, mesh.mesh_size(), r.rel_error));
    }
    let orders = observed_orders(&rows.iter().map(|r| (r.1, r.2)).collect::<Vec<_>>());
    for (k, &(level, h, error)) in rows.iter().enumerate() {
        let order = k.checked_sub(1).map(|j| orders[j]);
        report.convergence.push(ConvergenceRow { level, h, error, order });
    }
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    report.at_least("minimum observed order", ANCHOR_INTERIOR, min_order, cfg.tolerances.order.unwrap_or(1.7));
    let finest = rows.last().map(|r| r.2).unwrap_or(f64::NAN);
    report.at_most("finest-level relative error", ANCHOR_INTERIOR, finest, cfg.tolerances.relative_error.unwrap_or(DEFAULT_RELATIVE_ERROR));
    Ok(report)
}
