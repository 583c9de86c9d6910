use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the simulator can run on: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Scalar")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to every Scalar")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("every Scalar converts to f64")
    }

    /// Tolerance used by unit-sum and density-matrix checks.
    ///
    /// `1e-12` for `f64`; a few hundred ulps for narrower types.
    #[inline]
    fn unit_tolerance() -> Self {
        Self::of(1e-12).max(Self::epsilon() * Self::of(256.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
