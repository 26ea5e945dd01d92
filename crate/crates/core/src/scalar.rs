//! Scalar abstraction for the numeric kernels.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the math kernels are generic over.
///
/// Implemented by `f32` and `f64`. The default tolerances in
/// [`crate::NumericConfig`] assume binary64; instantiating at `f32`
/// requires correspondingly looser tolerances.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into `Self`.
    fn cst(v: f64) -> Self {
        Self::from_f64(v).expect("constant must be representable")
    }

    /// Lossy view as `f64`, used when reporting values.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + core::fmt::Debug
        + core::fmt::Display
        + Send
        + Sync
        + 'static
{
}
