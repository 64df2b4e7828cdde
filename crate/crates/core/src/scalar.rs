//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the kernel is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type (rounding for `f32`).
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// The golden number (1 + √5) / 2, computed in this precision.
    fn golden() -> Self {
        (Self::one() + Self::lit(5.0).sqrt()) / Self::lit(2.0)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a lattice index or count.
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
