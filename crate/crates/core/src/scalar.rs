use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the solver can run on (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for types that cannot hold it,
    /// which does not happen for `f32`/`f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable")
    }

    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index not representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

/// `x^q` for a non-negative integer exponent by repeated multiplication,
/// so negative bases never hit a domain error.
pub(crate) fn powi<T: Scalar>(x: T, q: u32) -> T {
    let mut acc = T::one();
    for _ in 0..q {
        acc = acc * x;
    }
    acc
}
