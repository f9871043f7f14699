//! Scalar abstraction for the numeric half of the toolkit.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the numeric modules are generic over: f32 or f64.
///
/// Prediction matrices, metrics, losses, and the optimizers all accept any
/// `Real`; the crate-root aliases pin the common double-precision choice.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossless-enough view used for hashing and reporting.
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn as_f64(self) -> f64 {
        f64::from(self)
    }
}

impl Real for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

/// Shorthand for converting a constant into the working scalar type.
pub(crate) fn real<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("f64 constant must convert into the scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_convert_both_ways() {
        let x: f32 = real(0.5);
        assert_eq!(x, 0.5f32);
        let y: f64 = real(0.5);
        assert_eq!(y, 0.5f64);
        assert_eq!(0.25f32.as_f64(), 0.25f64);
    }
}
