//! Fractional order newtype.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Fractional order `s` with the invariant `0 < s < 1` enforced at
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder<T: Real>(T);

impl<T: Real> FracOrder<T> {
    pub fn new(s: T) -> Result<Self> {
        if s > T::zero() && s < T::one() && s.is_finite() {
            Ok(FracOrder(s))
        } else {
            Err(Error::InvalidOrder(s.to_f64().unwrap_or(f64::NAN)))
        }
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }
}

impl<T: Real> TryFrom<f64> for FracOrder<T> {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        FracOrder::new(T::lit(v))
    }
}

impl<T: Real> From<FracOrder<T>> for f64 {
    fn from(s: FracOrder<T>) -> f64 {
        s.get().to_f64().unwrap()
    }
}

/// Convenience constructor for code that knows the value is admissible.
pub fn frac<T: Real>(s: f64) -> FracOrder<T> {
    FracOrder::new(T::lit(s)).expect("order outside (0,1)")
}
