#![allow(dead_code)]

use qdirac::{Complex, ComplexQuaternion, Point, QuatField};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Q = ComplexQuaternion;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_q(rng: &mut impl Rng) -> Q {
    Q { c: std::array::from_fn(|_| random_complex(rng)) }
}

pub fn random_vector_q(rng: &mut impl Rng) -> Q {
    let mut q = random_q(rng);
    q.c[0] = c(0.0, 0.0);
    q
}

pub fn random_unit(rng: &mut impl Rng) -> Point {
    loop {
        let p: Point = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [p[0] / n, p[1] / n, p[2] / n];
        }
    }
}

pub fn random_point(rng: &mut impl Rng, radius: f64) -> Point {
    std::array::from_fn(|_| rng.gen_range(-radius..radius))
}

/// `a0 (1 + i u)` with a real unit vector `u`.
pub fn random_zero_divisor(rng: &mut impl Rng) -> Q {
    let u = random_unit(rng);
    let a0 = random_complex(rng);
    (Q::ONE + Q::from_point(u) * c(0.0, 1.0)) * a0
}

/// `Σ_j a_j e^{i k_j·x}` in every component, wavevectors in `[-1, 1]³`.
pub fn random_smooth_field(rng: &mut impl Rng) -> QuatField {
    let terms: Vec<(usize, Complex, Point)> = (0..4)
        .flat_map(|k| (0..3).map(move |_| k))
        .map(|k| (k, random_complex(rng), random_point(rng, 1.0)))
        .collect();
    QuatField::new(move |x: Point| {
        let mut q = Q::ZERO;
        for &(k, a, w) in &terms {
            let phase = w[0] * x[0] + w[1] * x[1] + w[2] * x[2];
            q.c[k] += a * c(0.0, phase).exp();
        }
        q
    })
}

fn monomials(x: Point, degree: u32) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            for k in 0..=degree - i - j {
                out.push(x[0].powi(i as i32) * x[1].powi(j as i32) * x[2].powi(k as i32));
            }
        }
    }
    out
}

/// Random complex polynomial of total degree `degree` in every component.
pub fn random_polynomial_field(rng: &mut impl Rng, degree: u32) -> QuatField {
    let count = monomials([1.0; 3], degree).len();
    let coeffs: Vec<[Complex; 4]> =
        (0..count).map(|_| std::array::from_fn(|_| random_complex(rng))).collect();
    QuatField::new(move |x: Point| {
        let m = monomials(x, degree);
        let mut q = Q::ZERO;
        for (mono, coeff) in m.iter().zip(&coeffs) {
            for k in 0..4 {
                q.c[k] += coeff[k] * *mono;
            }
        }
        q
    })
}

pub fn scaled(p: Point, s: f64) -> Point {
    [p[0] * s, p[1] * s, p[2] * s]
}
