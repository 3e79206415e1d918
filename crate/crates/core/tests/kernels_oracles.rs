mod common;

use std::f64::consts::PI;

use common::*;
use qdirac::boundary_ops::{fd_apply, FdOperator};
use qdirac::fd;
use qdirac::gamma_spinor::{dirac_wm_fd, lift_a_inv, spinor_alpha};
use qdirac::kernels::{
    alpha_expr, alpha_projection_expr, alpha_to_nu, fund_e_zero_divisor, fund_k, fund_k_incoming,
    loglog_slope, null_field, radiation_residual, theta, KernelSign, RadiationKind, Source,
};
use qdirac::{Error, KernelParams, Point, QuatField};
use rand::Rng;

#[test]
fn theta_closed_form_values() {
    let t = theta([0.0, 0.0, 1.0], c(0.0, 0.0)).unwrap();
    assert!((t.re + 0.0795775).abs() < 1e-7 && t.im == 0.0);
    let t = theta([0.6, 0.8, 0.0], c(1.0, 0.0)).unwrap();
    assert!((t - c(-0.042996, -0.066962)).norm() < 1e-6);
    assert!(matches!(theta([0.0; 3], c(1.0, 0.0)), Err(Error::SingularPoint { .. })));
}

#[test]
fn helmholtz_oracle_at_unit_radius() {
    let nu = c(1.0, 0.0);
    let t = |y: Point| theta(y, nu).unwrap();
    let x = [0.0, 0.6, 0.8];
    assert!((fd::laplacian(&t, x, 1e-3) + nu * nu * t(x)).norm() < 1e-6);
}

#[test]
fn static_kernel_on_axis() {
    let k = fund_k([1.0, 0.0, 0.0], c(0.0, 0.0), KernelSign::Plus).unwrap();
    assert!(k.dist_c(&(Q::I1 * (-1.0 / (4.0 * PI)))) < 1e-16);
}

#[test]
fn kernel_is_minus_d_mp_nu_theta() {
    let mut rng = rng(21);
    for _ in 0..50 {
        let x = scaled(random_unit(&mut rng), rng.gen_range(1.0..3.0));
        let nu = c(rng.gen_range(0.2..2.0), rng.gen_range(0.0..1.0));
        let th = QuatField::new(move |y| Q::scalar(theta(y, nu).unwrap()));
        for sign in [KernelSign::Plus, KernelSign::Minus] {
            let expected = -fd_apply(FdOperator::DNu(-nu * sign.value()), &th, x, 1e-3);
            assert!(fund_k(x, nu, sign).unwrap().dist_c(&expected) < 1e-6);
            let k = QuatField::new(move |y| fund_k(y, nu, sign).unwrap());
            assert!(fd_apply(FdOperator::DNu(nu * sign.value()), &k, x, 1e-3).modulus_c() < 1e-6);
        }
    }
}

#[test]
fn incoming_kernel_solves_the_same_equation() {
    let nu = c(1.5, 0.0);
    let k = QuatField::new(move |y| fund_k_incoming(y, nu).unwrap());
    for x in [[1.0, 0.0, 0.0], [0.3, -1.2, 0.9], [2.0, 1.0, -1.5]] {
        assert!(fd_apply(FdOperator::DNu(nu), &k, x, 1e-3).modulus_c() < 1e-6);
    }
}

#[test]
fn branch_rule() {
    assert!((alpha_to_nu(spinor_alpha(2.0, 1.0)).unwrap() - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
    assert!((alpha_to_nu(spinor_alpha(1.0, 2.0)).unwrap() - c(0.0, 3f64.sqrt())).norm() < 1e-15);
    assert_eq!(alpha_to_nu(spinor_alpha(1.0, 1.0)).unwrap(), c(0.0, 0.0));
    let mut rng = rng(22);
    for _ in 0..200 {
        let alpha = random_vector_q(&mut rng);
        let nu = alpha_to_nu(alpha).unwrap();
        assert!(nu.im >= 0.0);
        assert_eq!(alpha_to_nu(-alpha).unwrap(), nu);
    }
}

#[test]
fn zero_divisor_fundamental_solution() {
    let alpha = spinor_alpha(1.0, 1.0);
    let e = QuatField::new(move |y| fund_e_zero_divisor(y, alpha).unwrap());
    for x in [[0.0, 0.0, 2.0], [1.2, -1.6, 0.0], [-0.8, 1.0, 1.4]] {
        assert!(fd_apply(FdOperator::DAlpha(alpha), &e, x, 1e-3).modulus_c() < 1e-6);
    }
    // O(1/r) overall, the K_0 part O(1/r²)
    let dir = [0.48, 0.6, -0.64];
    let rows: Vec<(f64, f64)> =
        [10.0, 100.0, 1000.0].iter().map(|&r| (r, e.eval(scaled(dir, r)).modulus_c())).collect();
    assert!((loglog_slope(&rows) + 1.0).abs() < 1e-2);
    let k0: Vec<(f64, f64)> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&r| (r, fund_k(scaled(dir, r), c(0.0, 0.0), KernelSign::Plus).unwrap().modulus_c()))
        .collect();
    assert!((loglog_slope(&k0) + 2.0).abs() < 1e-2);
    assert!(matches!(
        fund_e_zero_divisor([1.0, 0.0, 0.0], spinor_alpha(2.0, 1.0)),
        Err(Error::NotZeroDivisor { .. })
    ));
}

fn sources(rng: &mut impl Rng) -> Vec<Source> {
    (0..3).map(|_| Source::new(random_point(rng, 0.3), random_q(rng))).collect()
}

#[test]
fn generated_fields_are_null_solutions() {
    let mut rng = rng(23);
    let srcs = sources(&mut rng);
    let targets: Vec<Point> = (0..10).map(|_| scaled(random_unit(&mut rng), rng.gen_range(1.5..3.0))).collect();

    let nu = c(1.0, 0.3);
    let f = null_field(KernelParams::Nu(nu), &srcs).unwrap();
    let f = f.as_quaternion().unwrap();
    for &x in &targets {
        assert!(fd_apply(FdOperator::DNu(nu), f, x, 1e-3).modulus_c() < 1e-6);
    }

    for (omega, m) in [(2.0, 1.0), (1.0, 2.0), (1.0, 1.0)] {
        let alpha = spinor_alpha(omega, m);
        let f = null_field(KernelParams::Alpha(alpha), &srcs).unwrap();
        let f = f.as_quaternion().unwrap();
        for &x in &targets {
            assert!(fd_apply(FdOperator::DAlpha(alpha), f, x, 1e-3).modulus_c() < 1e-6, "({omega},{m})");
        }
        let q = null_field(KernelParams::SpinorWM { omega, m }, &srcs).unwrap();
        let q = q.as_spinor().unwrap();
        for &x in &targets {
            assert!(dirac_wm_fd(q, omega, m, x, 1e-3).norm() < 1e-6, "({omega},{m})");
        }
    }
}

#[test]
fn rad_residual_of_outgoing_kernel_matches_expansion() {
    let nu = c(1.0, 0.0);
    let coeff = Q::new(c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.0));
    let field = null_field(KernelParams::Nu(nu), &[Source::new([0.0; 3], coeff)]).unwrap();
    for r in [10.0, 100.0, 1000.0] {
        let x = scaled([0.0, 0.6, 0.8], r);
        let th = theta(x, nu).unwrap();
        let expected = ((1.0 / (r * r)) - c(0.0, 2.0) * nu / r).norm() * th.norm() * coeff.modulus_c();
        let got = radiation_residual(RadiationKind::Rad, &field, x, KernelParams::Nu(nu)).unwrap();
        assert!((got - expected).abs() < 1e-10 * expected, "r={r}: {got} vs {expected}");
    }
}

#[test]
fn incoming_kernel_is_not_radiating() {
    let nu = c(1.0, 0.0);
    let f = QuatField::new(move |x| fund_k_incoming(x, nu).unwrap()).into();
    let scaled_res: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&r| r * radiation_residual(RadiationKind::Rad, &f, scaled([1.0, 0.0, 0.0], r), KernelParams::Nu(nu)).unwrap())
        .collect();
    // r · residual → 2ν² |1 + i x̂|_c / 4π = 2√2 / 4π
    let limit = 2.0 * 2f64.sqrt() / (4.0 * PI);
    assert!(scaled_res.iter().all(|&v| (v - limit).abs() < 2e-2 * limit), "{scaled_res:?}");
}

#[test]
fn alpha_residual_equals_projected_form() {
    let mut rng = rng(24);
    for (omega, m) in [(2.0, 1.0), (1.0, 2.0), (3.0, 0.5)] {
        let alpha = spinor_alpha(omega, m);
        let nu = alpha_to_nu(alpha).unwrap();
        for _ in 0..100 {
            let f = random_q(&mut rng);
            let x = scaled(random_unit(&mut rng), rng.gen_range(0.5..50.0));
            let direct = alpha_expr(f, x, nu, alpha).unwrap() * (c(1.0, 0.0) / nu);
            let projected = alpha_projection_expr(f, x, alpha).unwrap();
            assert!(direct.dist_c(&projected) < 1e-12 * f.modulus_c().max(1.0));
        }
    }
}

#[test]
fn spinor_and_alpha_residuals_decay_together() {
    let (omega, m) = (2.0, 1.0);
    let srcs = [Source::new([0.1, 0.0, -0.2], Q::new(c(1.0, 0.0), c(0.0, 0.5), c(0.2, 0.0), c(0.0, -0.3)))];
    let alpha_params = KernelParams::Alpha(spinor_alpha(omega, m));
    let spinor_params = KernelParams::SpinorWM { omega, m };
    let f = null_field(alpha_params, &srcs).unwrap();
    let q: qdirac::AnyField = lift_a_inv(f.as_quaternion().unwrap()).into();
    let dir = [0.0, 0.6, 0.8];
    let rows = |field: &qdirac::AnyField, kind, params| -> Vec<(f64, f64)> {
        [10.0, 100.0, 1000.0]
            .iter()
            .map(|&r| (r, radiation_residual(kind, field, scaled(dir, r), params).unwrap()))
            .collect()
    };
    let a = loglog_slope(&rows(&f, RadiationKind::Alpha, alpha_params));
    let s = loglog_slope(&rows(&q, RadiationKind::Spinor, spinor_params));
    assert!(a < -1.9 && s < -1.9, "alpha slope {a}, spinor slope {s}");
}

#[test]
fn counterexample_expands_to_x_plus_i_r() {
    let x = [3.0, -4.0, 12.0];
    let r = 13.0;
    let f = (Q::ONE - Q::from_point(x) * c(0.0, 1.0 / r)) * (r * r);
    let product = Q::from_point(x) * (1.0 / (r * r)) * f;
    assert!(product.dist_c(&(Q::from_point(x) + Q::scalar(c(0.0, r)))) < 1e-12);
}

#[test]
fn residual_kind_mismatch() {
    let f: qdirac::AnyField = QuatField::constant(Q::ONE).into();
    let x = [1.0, 0.0, 0.0];
    assert!(matches!(
        radiation_residual(RadiationKind::Spinor, &f, x, KernelParams::Nu(c(1.0, 0.0))),
        Err(Error::KindMismatch(_))
    ));
    assert!(matches!(
        radiation_residual(RadiationKind::Rad, &f, x, KernelParams::SpinorWM { omega: 2.0, m: 1.0 }),
        Err(Error::KindMismatch(_))
    ));
}
