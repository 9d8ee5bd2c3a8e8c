//! Floating-point scalar abstraction used by all numeric code in this crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::Float;

/// Scalar type the fitting machinery is generic over.
///
/// `f32` and `f64` both implement it; `f64` is the default used by the
/// concrete aliases at the crate root and by the CLI.
pub trait Scalar:
    Float
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless for `f64`, rounded for `f32`.
    fn from_f64(x: f64) -> Self {
        Self::from(x).expect("finite f64 converts to any Scalar")
    }

    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("Scalar converts to f64")
    }

    /// Conversion for sample sizes and counts.
    fn from_usize(n: usize) -> Self {
        Self::from(n).expect("usize converts to any Scalar")
    }
}

impl<T> Scalar for T where
    T: Float
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
