//! Exact coefficient arithmetic: coordinate charts, sparse multivariate
//! Laurent polynomials and pointwise evaluation.
//!
//! Everything above this module is generic over a coefficient [`Field`].
//! The canonical instance is arbitrary-precision rationals; floating point
//! types also satisfy the bound, but zero tests are then only as good as
//! the rounding.

mod chart;
mod laurent;
mod point;

pub use chart::Chart;
pub use laurent::Laurent;
pub use point::Point;

use num_traits::{FromPrimitive, Num};
use std::fmt::Debug;
use std::ops::Neg;

/// Coefficient field of the Laurent ring.
pub trait Field: Num + Clone + Neg<Output = Self> + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T> Field for T where T: Num + Clone + Neg<Output = T> + FromPrimitive + Debug + Send + Sync + 'static {}

/// Embeds a machine integer into the coefficient field.
pub fn int<C: Field>(n: i64) -> C {
    C::from_i64(n).expect("coefficient field must contain the integers")
}

/// `(-1)^n` as a coefficient.
pub fn sign<C: Field>(n: usize) -> C {
    if n.is_multiple_of(2) {
        C::one()
    } else {
        -C::one()
    }
}
