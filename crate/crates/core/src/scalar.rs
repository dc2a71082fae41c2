//! Floating-point abstraction shared by every real-valued quantity in the
//! parser: entropies, similarity thresholds and accuracy metrics.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};

/// Real scalar used for entropies, thresholds and metrics: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + NumCast + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Lossless-enough conversion from a count.
    fn from_count(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("count representable as float")
    }

    /// Conversion from an `f64` literal or config value.
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 representable in scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `-Σ p·log2 p` over a frequency table whose counts sum to `total`.
///
/// Shared by message entropy (sampling) and positional entropy (variation
/// point decisions).
pub fn entropy_from_counts<T: Scalar, I>(counts: I, total: usize) -> T
where
    I: IntoIterator<Item = usize>,
{
    if total == 0 {
        return T::zero();
    }
    let n = T::from_count(total);
    // Summing in sorted order makes the result independent of the caller's
    // iteration order, so equal count multisets give bit-identical entropies.
    let mut sorted: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    sorted.sort_unstable();
    let h = sorted
        .into_iter()
        .map(|c| {
            let p = T::from_count(c) / n;
            -(p * p.log2())
        })
        .sum::<T>();
    // -0.0 and tiny negative rounding noise collapse to zero
    if h <= T::zero() {
        T::zero()
    } else {
        h
    }
}
