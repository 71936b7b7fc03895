//! Scalar abstraction: every numerical routine in this crate is generic over
//! the floating-point type through [`Real`]. Concrete `f64` aliases for the
//! main types live at the crate root.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

/// Floating-point scalar usable by the whole toolkit: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for embedding an `f64` literal into the scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable in scalar type")
    }

    /// Machine-sized integer cast used for node counts and grid sizes.
    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count not representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_roundtrip() {
        assert_eq!(<f64 as Real>::lit(0.5), 0.5);
        assert_eq!(<f32 as Real>::lit(2.0), 2.0f32);
        assert_eq!(<f64 as Real>::from_count(7), 7.0);
    }
}
