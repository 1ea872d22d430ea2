use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, NumCast, Signed, ToPrimitive};

/// Floating point type used for evaluation and simulation: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every `Scalar` can represent (a rounding of)
    /// any finite `f64`.
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("finite f64 literal")
    }

    /// Converts an exact coefficient, rounding to the nearest representable value.
    fn from_coefficient<C: Coefficient>(c: &C) -> Self {
        <Self as NumCast>::from(c.clone()).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Exact coefficient ring for truncated series.
///
/// Division is only ever performed by units (nonzero constants), so any field
/// works; the crate uses `BigRational`. Fixed-width rationals such as
/// `Ratio<i64>` also satisfy the bound but can overflow at higher orders.
pub trait Coefficient:
    Clone + PartialEq + Debug + Display + Num + Signed + Neg<Output = Self> + ToPrimitive + Send + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Num
        + Signed
        + Neg<Output = T>
        + ToPrimitive
        + Send
        + Sync
{
}
