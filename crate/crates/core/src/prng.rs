//! SplitMix64 pseudo-random source.
//!
//! Each draw adds the golden-ratio increment `0x9E3779B97F4A7C15` to the
//! state and mixes it with
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! so a seed yields the same stream on every platform.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rand_below called with a zero bound")]
pub struct ZeroBound;

#[derive(Debug, Clone)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn rand_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, bound)`, rejecting draws from the biased tail.
    #[inline]
    pub fn rand_below(&mut self, bound: u64) -> Result<u64, ZeroBound> {
        if bound == 0 {
            return Err(ZeroBound);
        }
        // 2^64 mod bound: draws below this would over-represent small values.
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.rand_u64();
            if r >= threshold {
                return Ok(r % bound);
            }
        }
    }

    /// Uniform `usize` in `[0, bound)`.
    #[inline]
    pub fn index_below(&mut self, bound: usize) -> Result<usize, ZeroBound> {
        self.rand_below(bound as u64).map(|v| v as usize)
    }

    /// Non-negative value below 2^62.
    #[inline]
    pub fn value62(&mut self) -> i64 {
        (self.rand_u64() >> 2) as i64
    }
}
