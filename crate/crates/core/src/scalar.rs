use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};
use rustfft::FftNum;

/// Floating-point scalar accepted by every solver in this crate.
///
/// Implemented for `f32` and `f64`. Tolerances quoted in the documentation
/// assume `f64`; the `f32` instantiation is useful for quick exploratory
/// runs and for checking that nothing silently depends on the width.
pub trait Real:
    Float
    + FloatConst
    + FftNum
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for finite input.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("finite literal")
    }

    fn of_usize(n: usize) -> Self {
        <Self as num_traits::NumCast>::from(n).expect("representable integer")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit(x)` in generic code.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}
