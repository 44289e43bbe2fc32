//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type the models and metrics are generic over.
///
/// Implemented for `f32` and `f64`. Values must round-trip through their
/// `Display`/`FromStr` pair bit-exactly, which both primitive floats do.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Default + Debug + Display + FromStr + Sum + Send + Sync + 'static
{
    /// Short type tag written into persisted artifacts.
    const NAME: &'static str;

    /// Map 64 random bits onto the open interval (0, 1).
    fn open01_from_bits(bits: u64) -> Self;

    /// Lossy conversion used for literals and ratings.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to any float scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("float scalar converts to f64")
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    fn open01_from_bits(bits: u64) -> Self {
        // 52 bits plus a half-step offset: the extremes are 2^-53 and
        // 1 - 2^-53, both exactly representable.
        ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";

    fn open01_from_bits(bits: u64) -> Self {
        ((bits >> 41) as f32 + 0.5) * (1.0 / (1u32 << 23) as f32)
    }
}

/// Dot product of two equal-length rows.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
