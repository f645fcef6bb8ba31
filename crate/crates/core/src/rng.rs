//! Counter-based deterministic random values for parameter sweeps.
//!
//! Every draw is a pure function of (seed, counter), so sweeps reproduce
//! bit-exactly across runs and platforms.

use num_complex::Complex64 as C64;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic stream of f64/complex draws derived from a 64-bit seed.
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.seed.wrapping_add(GAMMA.wrapping_mul(self.counter)))
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [-half_width, half_width).
    pub fn next_symmetric(&mut self, half_width: f64) -> f64 {
        (self.next_f64() * 2.0 - 1.0) * half_width
    }

    /// Complex value in the centered square of the given half-width.
    pub fn next_complex(&mut self, half_width: f64) -> C64 {
        C64::new(
            self.next_symmetric(half_width),
            self.next_symmetric(half_width),
        )
    }
}
