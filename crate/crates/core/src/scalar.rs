//! Scalar abstraction for the numeric kernels.
//!
//! Metric, histogram, and divergence code is generic over [`Real`] so the
//! same kernels run in `f32` or `f64`. The pipeline uses the `f64` aliases
//! exported from the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by every numeric kernel in this crate.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Lift an `f64` constant into the working scalar type.
#[inline]
pub fn cast<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("finite f64 constant representable in scalar type")
}

/// Lift a count into the working scalar type.
#[inline]
pub fn cast_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("usize representable in scalar type")
}
