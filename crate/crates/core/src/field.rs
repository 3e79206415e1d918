use std::fmt;
use std::sync::Arc;

use crate::cqalg::ComplexQuaternion;
use crate::gamma_spinor::Spinor4;
use crate::Point;

/// A field `R³ -> T`, cheap to clone and safe to share between threads.
///
/// Evaluation at a declared singular point yields non-finite values.
pub struct Field<T> {
    eval: Arc<dyn Fn(Point) -> T + Send + Sync>,
    singular_points: Vec<Point>,
}

pub type QuatField = Field<ComplexQuaternion>;
pub type SpinorField = Field<Spinor4>;

impl<T> Clone for Field<T> {
    fn clone(&self) -> Self {
        Self { eval: Arc::clone(&self.eval), singular_points: self.singular_points.clone() }
    }
}

impl<T> fmt::Debug for Field<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("singular_points", &self.singular_points).finish()
    }
}

impl<T> Field<T> {
    pub fn new(eval: impl Fn(Point) -> T + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval), singular_points: Vec::new() }
    }

    pub fn with_singularities(mut self, points: impl IntoIterator<Item = Point>) -> Self {
        self.singular_points.extend(points);
        self
    }

    #[inline]
    pub fn eval(&self, x: Point) -> T {
        (self.eval)(x)
    }

    pub fn singular_points(&self) -> &[Point] {
        &self.singular_points
    }

    /// Distance from `x` to the nearest declared singularity (`inf` if none).
    pub fn distance_to_singularity(&self, x: Point) -> f64 {
        self.singular_points
            .iter()
            .map(|p| crate::norm3(crate::sub3(x, *p)))
            .fold(f64::INFINITY, f64::min)
    }
}

impl<T: 'static> Field<T> {
    pub fn map<U>(&self, f: impl Fn(Point, T) -> U + Send + Sync + 'static) -> Field<U> {
        let inner = self.clone();
        Field {
            eval: Arc::new(move |x| f(x, inner.eval(x))),
            singular_points: self.singular_points.clone(),
        }
    }
}

impl QuatField {
    pub fn constant(value: ComplexQuaternion) -> Self {
        Self::new(move |_| value)
    }
}

/// Either a quaternion-valued or a spinor-valued field.
#[derive(Clone, Debug)]
pub enum AnyField {
    Quaternion(QuatField),
    Spinor(SpinorField),
}

impl AnyField {
    pub fn as_quaternion(&self) -> Option<&QuatField> {
        match self {
            AnyField::Quaternion(f) => Some(f),
            AnyField::Spinor(_) => None,
        }
    }

    pub fn as_spinor(&self) -> Option<&SpinorField> {
        match self {
            AnyField::Spinor(f) => Some(f),
            AnyField::Quaternion(_) => None,
        }
    }

    pub fn singular_points(&self) -> &[Point] {
        match self {
            AnyField::Quaternion(f) => f.singular_points(),
            AnyField::Spinor(f) => f.singular_points(),
        }
    }
}

impl From<QuatField> for AnyField {
    fn from(f: QuatField) -> Self {
        AnyField::Quaternion(f)
    }
}

impl From<SpinorField> for AnyField {
    fn from(f: SpinorField) -> Self {
        AnyField::Spinor(f)
    }
}
