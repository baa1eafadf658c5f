//! Scalar abstraction shared by every probability computation.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::LinalgScalar;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar used for probabilities and information measures: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Allowed drift of total probability mass before a table is rejected.
    fn mass_tol() -> Self;

    /// Slack used when comparing derived probabilities for equality.
    fn cmp_tol() -> Self;

    /// Lossy conversion from `f64`; every value used here is representable.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is convertible to every Real")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize is convertible to every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real is convertible to f64")
    }
}

impl Real for f64 {
    #[inline]
    fn mass_tol() -> Self {
        1e-9
    }
    #[inline]
    fn cmp_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    #[inline]
    fn mass_tol() -> Self {
        1e-5
    }
    #[inline]
    fn cmp_tol() -> Self {
        1e-6
    }
}

/// `-q log2 q` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn plogp<R: Real>(q: R) -> R {
    if q <= R::zero() {
        R::zero()
    } else {
        -q * q.log2()
    }
}
