//! Floating-point scalar abstraction so the whole solver stack can run in
//! either single or double precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar the solver is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy-but-deterministic conversion from `f64` (exact for `f64`).
    fn of(v: f64) -> Self;

    /// Widen to `f64` for reporting and timing math.
    fn as_f64(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn of(v: f64) -> f32 {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline]
    fn of(v: f64) -> f64 {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}
