//! Deterministic, splittable random streams.
//!
//! Every random draw in the crate flows through an [`RngStream`]: a
//! `(seed, stream id)` pair realized as ChaCha8 with the id placed on the
//! cipher's 64-bit stream counter. A stream is a tiny `Copy` value and
//! deriving a child with [`RngStream::substream`] is a pure function that
//! never advances the parent, so the same `(seed, path of ids)` always
//! produces the same sequence no matter which thread runs it or in what
//! order substreams are consumed. Population sampling assigns one substream
//! per solution row (or mirrored pair), which is what makes results
//! independent of the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; decorrelates substream ids that differ in few bits.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    /// Root stream for a run. All randomness of a reproducible run should be
    /// derived from one root via `substream` chains.
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Child stream for `id`. Distinct ids (and distinct derivation paths)
    /// give statistically independent sequences.
    #[must_use]
    pub fn substream(self, id: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(id)),
        }
    }

    /// Instantiate the generator positioned at the start of this stream.
    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    pub fn seed(self) -> u64 {
        self.seed
    }
}
