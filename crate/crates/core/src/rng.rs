//! Seeded random streams.
//!
//! Every sampler in this crate draws from a [`RandomStream`], a thin wrapper
//! around xoshiro256++ that counts the 64-bit words it hands out. Streams for
//! parallel workers are split off a master seed with [`RandomStream::derive`],
//! which applies the generator's long-jump (2^192 steps) once per index, so
//! derived streams never overlap in practice.

use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, Gamma, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

const INV_2_POW_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    rng: Xoshiro256PlusPlus,
    draw_count: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            draw_count: 0,
        }
    }

    /// Independent stream number `index` for the master seed `self.seed()`.
    ///
    /// The result depends only on the seed and the index, not on how far
    /// `self` has advanced.
    pub fn derive(&self, index: u64) -> Self {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(self.seed);
        for _ in 0..=index {
            rng.long_jump();
        }
        RandomStream {
            seed: self.seed,
            rng,
            draw_count: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 64-bit words consumed so far.
    pub fn draw_count(&self) -> u64 {
        self.draw_count
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution. Consumes one word.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * INV_2_POW_53
    }

    /// Standard normal variate (ziggurat; exact up to floating point).
    /// Consumes a variable number of words, one in the common case.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }

    /// Fair random sign, `-1.0` or `+1.0`. Consumes one word.
    #[inline]
    pub fn rademacher(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// `Gamma(shape, 1)` by Marsaglia–Tsang rejection, boosted for
    /// `shape < 1`.
    pub fn gamma(&mut self, shape: f64) -> Result<f64> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::param(format!("gamma shape must be positive and finite, got {shape}")));
        }
        let dist = Gamma::new(shape, 1.0).map_err(|e| Error::param(format!("gamma: {e}")))?;
        Ok(dist.sample(self))
    }
}

impl RngCore for RandomStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.draw_count += 1;
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

/// Parses a seed given in decimal or as `0x`-prefixed hexadecimal.
pub fn parse_seed(text: &str) -> Result<u64> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse::<u64>(),
    };
    parsed.map_err(|_| Error::param(format!("seed must be a decimal or 0x-prefixed hex u64, got '{text}'")))
}
