//! Seeded randomness.
//!
//! All randomness flows through [`Rng`], a thin wrapper over ChaCha8
//! (`rand_chacha`), whose output stream is fixed by its published
//! algorithm and therefore identical on every platform. Seeds are expanded
//! with `SeedableRng::seed_from_u64`.
//!
//! Independent sub-streams (labels, activities, growth, benchmark cells) are
//! obtained with [`derive_seed`], a SplitMix64-style mixer of the parent seed
//! and a stream tag.

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random stream.
#[derive(Clone, Debug)]
pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        self.inner.gen_range(0..bound as u64) as usize
    }

    /// `true` with probability `p`. Consumes no randomness when `p` is 0 or 1.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.next_f64() < p
        }
    }

    /// Fisher–Yates shuffle (descending swap positions).
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Mixes a parent seed with a stream tag into an independent child seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream tags used by the generators.
pub(crate) mod stream {
    pub const LABELS: u64 = 1;
    pub const ACTIVITY: u64 = 2;
    pub const GROWTH: u64 = 3;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn frozen_first_draws() {
        // Pins the algorithm: a change of generator or seeding scheme breaks this.
        let mut r = Rng::new(0);
        assert_eq!(r.next_u64(), 13080132717333068652);
        assert_eq!(r.next_u64(), 8594738769458413623);
    }

    #[test]
    fn unit_interval() {
        let mut r = Rng::new(7);
        for _ in 0..10_000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn bernoulli_extremes_consume_nothing() {
        let mut a = Rng::new(3);
        let mut b = Rng::new(3);
        assert!(!a.bernoulli(0.0));
        assert!(a.bernoulli(1.0));
        assert_eq!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn derived_seeds_differ() {
        let s = 99;
        assert_ne!(derive_seed(s, 1), derive_seed(s, 2));
        assert_ne!(derive_seed(s, 1), derive_seed(s + 1, 1));
        assert_eq!(derive_seed(s, 5), derive_seed(s, 5));
    }
}
