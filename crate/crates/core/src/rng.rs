//! Seeded, stream-splittable random number generation.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamId {
    pub seed: u64,
    pub stream: u64,
}

/// ChaCha8 generator addressed by `(seed, stream)`. Identical ids produce
/// identical sequences on every platform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    id: StreamId,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng {
            id: StreamId { seed, stream },
            inner,
        }
    }

    pub fn id(&self) -> StreamId {
        self.id
    }

    /// A generator for a sub-task, keyed by `index`; independent of how
    /// sub-tasks are scheduled.
    pub fn derive(&self, index: u64) -> SeededRng {
        SeededRng::new(mix(self.id.seed ^ mix(self.id.stream)), index)
    }
}

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
