//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the models are computed in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for diagnostics and text output.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count into this scalar.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Relative slack accepted at closed domain endpoints so that
    /// round-off in `R * (x_max / R)` does not reject the endpoint.
    #[inline]
    fn endpoint_slack() -> Self {
        Self::epsilon() * Self::lit(16.0)
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// `x` if it lies in `[lo, hi]`, the nearest bound if it lies within the
/// endpoint slack outside of it, `None` otherwise (including NaN).
pub(crate) fn clamp_to_closed<T: Scalar>(x: T, lo: T, hi: T) -> Option<T> {
    if x.is_nan() {
        return None;
    }
    if x >= lo && x <= hi {
        return Some(x);
    }
    let slack = T::endpoint_slack() * hi.abs().max(lo.abs()).max(T::min_positive_value());
    if x < lo && lo - x <= slack {
        Some(lo)
    } else if x > hi && x - hi <= slack {
        Some(hi)
    } else {
        None
    }
}
