//! Batched products and index-parallel helpers.
//!
//! With the default `parallel` feature the top-level functions run on the
//! rayon thread pool; without it they fall back to [`sequential`]. Both
//! backends are always element-wise identical, so results never depend on
//! the feature set or the thread count.

use crate::octonion::{direct_mul, SplitOctonion};
use crate::scalars::ScalarRing;
use crate::schedule::{apply, fast_mul, PreparedMultiplier};

pub mod sequential {
    use super::*;

    pub fn map_indexed<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
        (0..n).map(f).collect()
    }

    pub fn find_first(n: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
        (0..n).find(|&i| pred(i))
    }

    pub fn direct_batch<S: ScalarRing>(xs: &[SplitOctonion<S>], bs: &[SplitOctonion<S>]) -> Vec<SplitOctonion<S>> {
        assert_eq!(xs.len(), bs.len(), "operand batches differ in length");
        xs.iter().zip(bs).map(|(x, b)| direct_mul(x, b)).collect()
    }

    pub fn fast_batch<S: ScalarRing>(xs: &[SplitOctonion<S>], bs: &[SplitOctonion<S>]) -> Vec<SplitOctonion<S>> {
        assert_eq!(xs.len(), bs.len(), "operand batches differ in length");
        xs.iter().zip(bs).map(|(x, b)| fast_mul(x, b)).collect()
    }

    pub fn apply_batch<S: ScalarRing>(p: &PreparedMultiplier<S>, xs: &[SplitOctonion<S>]) -> Vec<SplitOctonion<S>> {
        xs.iter().map(|x| apply(p, x)).collect()
    }
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use rayon::prelude::*;

    use super::*;

    pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        (0..n).into_par_iter().map(f).collect()
    }

    /// Lowest index satisfying `pred`, regardless of scheduling.
    pub fn find_first(n: usize, pred: impl Fn(usize) -> bool + Sync + Send) -> Option<usize> {
        (0..n).into_par_iter().find_first(|&i| pred(i))
    }

    pub fn direct_batch<S>(xs: &[SplitOctonion<S>], bs: &[SplitOctonion<S>]) -> Vec<SplitOctonion<S>>
    where
        S: ScalarRing + Send + Sync,
    {
        assert_eq!(xs.len(), bs.len(), "operand batches differ in length");
        xs.par_iter().zip(bs).map(|(x, b)| direct_mul(x, b)).collect()
    }

    pub fn fast_batch<S>(xs: &[SplitOctonion<S>], bs: &[SplitOctonion<S>]) -> Vec<SplitOctonion<S>>
    where
        S: ScalarRing + Send + Sync,
    {
        assert_eq!(xs.len(), bs.len(), "operand batches differ in length");
        xs.par_iter().zip(bs).map(|(x, b)| fast_mul(x, b)).collect()
    }

    pub fn apply_batch<S>(p: &PreparedMultiplier<S>, xs: &[SplitOctonion<S>]) -> Vec<SplitOctonion<S>>
    where
        S: ScalarRing + Send + Sync,
    {
        xs.par_iter().map(|x| apply(p, x)).collect()
    }
}

#[cfg(feature = "parallel")]
pub use parallel::{apply_batch, direct_batch, fast_batch, find_first, map_indexed};
#[cfg(not(feature = "parallel"))]
pub use sequential::{apply_batch, direct_batch, fast_batch, find_first, map_indexed};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::prepare;

    fn sample(n: usize) -> Vec<SplitOctonion<f64>> {
        (0..n)
            .map(|i| SplitOctonion::from_fn(|k| ((i * 8 + k) as f64 * 0.37).sin() * 100.0))
            .collect()
    }

    #[test]
    fn backends_agree() {
        let xs = sample(257);
        let bs = sample(257).into_iter().rev().collect::<Vec<_>>();
        let seq = sequential::fast_batch(&xs, &bs);
        assert_eq!(fast_batch(&xs, &bs), seq);
        assert_eq!(direct_batch(&xs, &bs), sequential::direct_batch(&xs, &bs));
        let p = prepare(&bs[3]);
        assert_eq!(apply_batch(&p, &xs), sequential::apply_batch(&p, &xs));
    }

    #[test]
    fn find_first_returns_lowest_index() {
        assert_eq!(find_first(10_000, |i| i % 977 == 976), Some(976));
        assert_eq!(find_first(100, |_| false), None);
        assert_eq!(sequential::find_first(10_000, |i| i % 977 == 976), Some(976));
    }

    #[test]
    fn empty_batches() {
        let none: Vec<SplitOctonion<f64>> = Vec::new();
        assert!(fast_batch(&none, &none).is_empty());
        assert!(map_indexed(0, |i| i).is_empty());
    }
}
