//! Floating-point scalar abstraction shared by the matrix, measurement and
//! analytic layers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real scalar usable throughout the crate: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance used for internal consistency checks (imaginary
    /// residues, Hermiticity, feasibility slack).
    fn consistency_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the value is not
    /// representable, which cannot happen for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts to float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn consistency_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    #[inline]
    fn consistency_tol() -> Self {
        1e-4
    }
}
