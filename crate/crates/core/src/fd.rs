//! Second-order central finite differences for fields on R³.

use std::ops::{Add, Mul, Sub};

use crate::cqalg::{Complex, ComplexQuaternion};
use crate::gamma_spinor::Spinor4;
use crate::Point;

/// Values that form a real vector space, enough for difference quotients.
pub trait FdValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl FdValue for Complex {}
impl FdValue for ComplexQuaternion {}
impl FdValue for Spinor4 {}

/// Default step `h = 1e-3 (1 + |x|)`.
pub fn default_step(x: Point) -> f64 {
    1e-3 * (1.0 + crate::norm3(x))
}

fn shifted(x: Point, k: usize, d: f64) -> Point {
    let mut y = x;
    y[k] += d;
    y
}

/// `∂_k f(x) ≈ (f(x + h e_k) - f(x - h e_k)) / 2h`
pub fn partial<T: FdValue>(f: &impl Fn(Point) -> T, x: Point, k: usize, h: f64) -> T {
    (f(shifted(x, k, h)) - f(shifted(x, k, -h))) * (0.5 / h)
}

/// All three first partials.
pub fn gradient<T: FdValue>(f: &impl Fn(Point) -> T, x: Point, h: f64) -> [T; 3] {
    [partial(f, x, 0, h), partial(f, x, 1, h), partial(f, x, 2, h)]
}

/// `Δf(x)` with the standard 7-point stencil.
pub fn laplacian<T: FdValue>(f: &impl Fn(Point) -> T, x: Point, h: f64) -> T {
    let centre = f(x);
    let mut acc = centre * 0.0;
    for k in 0..3 {
        acc = acc + f(shifted(x, k, h)) + f(shifted(x, k, -h)) - centre * 2.0;
    }
    acc * (1.0 / (h * h))
}
