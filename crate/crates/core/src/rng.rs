//! Seeded, portable randomness.
//!
//! Every coin flip in the crate comes from a ChaCha8 generator addressed by
//! `(seed, stream)`. Substreams are derived by mixing a child index into the
//! stream word, so independent consumers never share draws and the sequence
//! is identical on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// An addressable random stream: a 64-bit seed plus a derived stream ID.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, stream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream `index`.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_address_same_draws() {
        let a: Vec<u64> = RngStream::new(7).substream(3).generator().sample_iter(rand::distributions::Standard).take(8).collect();
        let b: Vec<u64> = RngStream::new(7).substream(3).generator().sample_iter(rand::distributions::Standard).take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn substreams_differ() {
        let root = RngStream::new(7);
        let x: u64 = root.substream(0).generator().gen();
        let y: u64 = root.substream(1).generator().gen();
        let z: u64 = root.generator().gen();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn frozen_first_draw() {
        // Pins the generator choice; a change here breaks every golden value.
        let v: u64 = RngStream::new(1).generator().gen();
        assert_eq!(v, 7_424_550_030_962_593_201);
    }
}
