//! Counter-based randomness: every draw is a pure function of
//! `(master seed, site, time, stream)`, so chains, windows and horizons that
//! ask for the same `(site, time)` always see the same value.

use serde::{Deserialize, Serialize};

/// Logical stream tags mixed into the hash.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Update = 0x41,
    Order = 0x42,
    OrderResample = 0x43,
    ColorRank = 0x51,
    ColorSpin = 0x52,
    Payload = 0x61,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-time-step update values `A_{u,n}` and order labels `B_{u,n}`,
/// derived statelessly from a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SweepRandomness {
    seed: u64,
}

impl SweepRandomness {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent randomness for replica `index`.
    pub fn replica(&self, index: u64) -> Self {
        Self {
            seed: mix64(self.seed ^ mix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15))),
        }
    }

    #[inline]
    pub fn bits(&self, site: usize, time: u64, stream: Stream) -> u64 {
        let a = mix64((site as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ stream as u64);
        let b = mix64(time.wrapping_mul(0xA076_1D64_78BD_642F) ^ a);
        mix64(self.seed.wrapping_add(0x9E37_79B9_7F4A_7C15) ^ b)
    }

    /// Uniform on `(0, 1]` with 53 bits.
    #[inline]
    pub fn uniform(&self, site: usize, time: u64, stream: Stream) -> f64 {
        ((self.bits(site, time, stream) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `A_{u,n}` for the continuous update.
    #[inline]
    pub fn update_value(&self, site: usize, time: u64) -> f64 {
        self.uniform(site, time, Stream::Update)
    }

    /// Real order label `B_{u,n}`.
    #[inline]
    pub fn order_real(&self, site: usize, time: u64) -> f64 {
        self.uniform(site, time, Stream::Order)
    }

    /// Redraw of a real order label, used only when two labels collide.
    pub fn order_real_resample(&self, site: usize, time: u64, attempt: u64) -> f64 {
        self.uniform(site, time.wrapping_mul(0x1_0000).wrapping_add(attempt), Stream::OrderResample)
    }

    /// Digit order label `B_{u,n}` uniform on `1..=d`.
    #[inline]
    pub fn order_digit(&self, site: usize, time: u64, d: u32) -> u32 {
        self.below(site, time, Stream::Order, d) + 1
    }

    /// Uniform on `0..n` (multiply-shift on the top 32 bits).
    #[inline]
    pub fn below(&self, site: usize, time: u64, stream: Stream, n: u32) -> u32 {
        (((self.bits(site, time, stream) >> 32) * u64::from(n)) >> 32) as u32
    }
}
