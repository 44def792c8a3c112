//! The single source of randomness for every generator.
//!
//! State is xoshiro256** seeded from a `u64` through splitmix64. Derived draws
//! are defined here, not delegated to a distribution library, so that another
//! implementation can reproduce instances bit for bit:
//!
//! * `coin()` is the top bit of the next output.
//! * `below(b)` is the high word of the 128-bit product `next_u64() * b`.
//! * `shuffle` is Fisher–Yates from the last index down, drawing
//!   `below(i + 1)` for position `i`.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: Xoshiro256StarStar,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    #[inline]
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
