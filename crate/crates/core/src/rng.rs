//! Counter-based splittable RNG for reproducible simulation.
//!
//! Each trial gets its own stream derived from `(seed, trial_index)` by
//! strong integer mixing, so results do not depend on how trials are split
//! across threads. The per-stream generator is SplitMix64: fast, passes
//! standard statistical batteries, and trivially portable. Not for secrets.

use rand::RngCore;

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// SplitMix64 finalizer: bijective avalanche over u64.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// One independent random stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRng {
    state: u64,
}

impl TrialRng {
    /// Root stream for a seed (the stream of trial index 0 is distinct).
    pub fn new(seed: u64) -> Self {
        TrialRng { state: mix(seed) }
    }

    /// Stream for one trial, independent of every other trial index.
    pub fn for_trial(seed: u64, trial_index: u64) -> Self {
        let tagged = mix(seed) ^ trial_index.wrapping_mul(0xA24BAED4963EE407).wrapping_add(1);
        TrialRng { state: mix(tagged) }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..len` (widening-multiply method; the bias of
    /// 2^-64 is irrelevant here).
    #[inline]
    pub fn next_index(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        ((u128::from(self.next_u64()) * len as u128) >> 64) as usize
    }

    /// Bernoulli draw.
    #[inline]
    pub fn next_bool(&mut self, prob: f64) -> bool {
        self.next_f64() < prob
    }
}

impl RngCore for TrialRng {
    fn next_u32(&mut self) -> u32 {
        (TrialRng::next_u64(self) >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        TrialRng::next_u64(self)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        rand::rand_core::impls::fill_bytes_via_next(self, dst)
    }
}
