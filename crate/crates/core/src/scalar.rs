//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the solver can run in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}
