//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the analytic and simulation code is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances that would sit below the
/// precision of the type are clamped with [`Real::tol`].
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal. Infallible for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// A relative tolerance no tighter than a small multiple of machine epsilon.
    #[inline]
    fn tol(requested: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(requested).max(floor)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Decibels to linear power ratio.
#[inline]
pub fn db_to_linear<R: Real>(db: R) -> R {
    R::lit(10.0).powf(db / R::lit(10.0))
}

/// Linear power ratio to decibels.
#[inline]
pub fn linear_to_db<R: Real>(linear: R) -> R {
    R::lit(10.0) * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_conversions() {
        assert!((db_to_linear(3.0_f64) - 1.995_262_314_968_879_5).abs() < 1e-15);
        assert_eq!(db_to_linear(0.0_f64), 1.0);
        assert!((linear_to_db(db_to_linear(-7.25_f64)) + 7.25).abs() < 1e-12);
        assert!((db_to_linear(10.0_f32) - 10.0).abs() < 1e-5);
    }

    #[test]
    fn tolerance_is_clamped_for_f32() {
        assert!(f32::tol(1e-12) > 1e-6);
        assert_eq!(f64::tol(1e-8), 1e-8);
    }
}
