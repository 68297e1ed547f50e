//! Seeded symbol sampling.
//!
//! Draws come from SplitMix64 seeded with the raw 64-bit seed. A field
//! symbol is taken from one 64-bit output by rejection: outputs at or above
//! the largest multiple of the field order are discarded, the rest are
//! reduced modulo the order.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::field::Elem;

pub struct SymbolRng {
    inner: SplitMix64,
}

impl SymbolRng {
    pub fn new(seed: u64) -> Self {
        SymbolRng { inner: SplitMix64::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform value in `[0, bound)`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let v = self.inner.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }

    pub fn symbol(&mut self, order: u64) -> Elem {
        Elem(self.below(order))
    }

    pub fn symbols(&mut self, order: u64, len: usize) -> Vec<Elem> {
        (0..len).map(|_| self.symbol(order)).collect()
    }

    /// `count` distinct values from `pool`, in pool order.
    pub fn choose(&mut self, pool: &[usize], count: usize) -> Vec<usize> {
        let mut items = pool.to_vec();
        for i in 0..count.min(items.len()) {
            let j = i + self.below((items.len() - i) as u64) as usize;
            items.swap(i, j);
        }
        let mut out: Vec<usize> = items.into_iter().take(count).collect();
        out.sort_unstable();
        out
    }
}
