//! Scalar abstraction shared by every probability computation in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar a network can be instantiated over: `f32` or `f64`.
///
/// The tolerances scale with the precision of the type. For `f64` they are
/// the documented values (clamp band 1e-12, row sums 1e-9).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Values this far outside `[0, 1]` are clamped instead of rejected.
    fn clamp_tolerance() -> Self;

    /// Allowed deviation of a CPT row sum from one.
    fn row_tolerance() -> Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn clamp_tolerance() -> Self {
        1e-12
    }

    fn row_tolerance() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn clamp_tolerance() -> Self {
        1e-6
    }

    fn row_tolerance() -> Self {
        1e-5
    }
}
