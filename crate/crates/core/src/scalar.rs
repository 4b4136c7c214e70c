//! Scalar abstractions.
//!
//! Symbolization, histograms and the power measures only need signed ring
//! arithmetic and an ordering, so they run on floats, integers and exact
//! rationals alike. The Kuramoto integrator needs transcendental functions and
//! is bounded on [`Real`].

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive};

/// Sample type accepted by the symbolizer and the measures.
pub trait Scalar:
    Signed + PartialOrd + Copy + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Whether the value is a finite real. Always true for exact types.
    fn is_finite_value(&self) -> bool {
        true
    }

    /// Lossy conversion used for reporting. Exact types round to nearest.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalar.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for i32 {}
impl Scalar for i64 {}
impl Scalar for Ratio<i32> {}
impl Scalar for Ratio<i64> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finiteness() {
        assert!(1.0f64.is_finite_value());
        assert!(!f64::NAN.is_finite_value());
        assert!(!f32::INFINITY.is_finite_value());
        assert!(Ratio::new(1i64, 3).is_finite_value());
        assert_eq!(Ratio::new(1i64, 4).to_f64_lossy(), 0.25);
    }
}
