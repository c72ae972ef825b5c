use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Floating point scalar the numerics are written against: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Signed
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance used when deciding whether a lattice point sits on
    /// the boundary of the unstable ellipse.
    fn boundary_tolerance() -> Self {
        let floor = Self::from_f64(1e-12).unwrap();
        let eps = Self::epsilon() * Self::from_f64(16.0).unwrap();
        if eps > floor {
            eps
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer into the working scalar.
#[inline]
pub(crate) fn int<T: Real>(x: i64) -> T {
    T::from_i64(x).expect("integer representable in scalar type")
}
