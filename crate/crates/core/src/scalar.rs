//! Scalar abstraction for the numeric parts of the toolkit.
//!
//! All ratio measures, test statistics, distances, and branch lengths are
//! computed over a type implementing [`Real`], with `f32` and `f64`
//! supported out of the box. The CLI and the report pipeline fix the
//! scalar to `f64`; see the aliases at the crate root.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar used by every numeric computation in this crate.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from a token or hit count.
    fn from_count(c: usize) -> Self {
        Self::from_usize(c).expect("count representable in scalar type")
    }

    /// Shorthand for converting an `f64` constant.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    fn percent<R: Real>(hits: usize, total: usize) -> R {
        R::c(100.0) * R::from_count(hits) / R::from_count(total)
    }

    #[test]
    fn works_for_both_widths() {
        assert_eq!(percent::<f64>(1, 4), 25.0);
        assert_eq!(percent::<f32>(1, 4), 25.0f32);
    }
}
