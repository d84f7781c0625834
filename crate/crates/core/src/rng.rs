//! Counter-based random streams keyed by `(seed, label)`.
//!
//! Every consumer of randomness (the game itself, each wrapper, each agent)
//! owns its own labelled substream. Draw `n` of a stream is a pure function
//! of `(seed, label, n)`, so adding or removing a wrapper never shifts the
//! sequence another component sees.

use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
fn label_hash(label: &str) -> u64 {
    label.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3))
}

fn stream_key(seed: u64, label: &str) -> u64 {
    mix64(mix64(seed).wrapping_add(GOLDEN_GAMMA) ^ mix64(label_hash(label)))
}

/// A deterministic, labelled random stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    label: String,
    key: u64,
    counter: u64,
}

/// Derive the stream for `(seed, label)`, positioned at draw 0.
pub fn rng_substream(seed: u64, label: &str) -> RngStream {
    RngStream::new(seed, label)
}

impl RngStream {
    pub fn new(seed: u64, label: &str) -> Self {
        Self { seed, label: label.to_owned(), key: stream_key(seed, label), counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Value of draw `index`, independent of the current position.
    #[inline]
    pub fn at(&self, index: u64) -> u64 {
        mix64(self.key.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = self.at(self.counter);
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`. `n` must be non-zero.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((u128::from(self.next_u64()) * u128::from(n)) >> 64) as u64
    }

    /// `true` with probability `p`. Always consumes exactly one draw.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Child stream keyed off this stream's identity, not its position.
    pub fn substream(&self, label: &str) -> RngStream {
        RngStream::new(self.key, label)
    }
}
