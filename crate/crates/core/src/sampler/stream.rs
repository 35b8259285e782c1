//! Seeded, seekable random streams.
//!
//! A stream is ChaCha8 keyed by the master seed, with the 64-bit stream id
//! selecting an independent keystream and the word position acting as the
//! counter. Output depends only on `(master_seed, stream_id, counter)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// FNV-1a over the tag bytes.
fn fnv1a32(tag: &str) -> u32 {
    tag.bytes().fold(0x811c_9dc5u32, |h, b| {
        (h ^ b as u32).wrapping_mul(0x0100_0193)
    })
}

/// Stream id for shard `shard` of operation `tag`: `fnv1a32(tag) << 32 | shard`.
pub fn stream_id(tag: &str, shard: u32) -> u64 {
    (fnv1a32(tag) as u64) << 32 | shard as u64
}

#[derive(Clone, Debug)]
pub struct RandomStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RandomStream {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn for_shard(master_seed: u64, tag: &str, shard: u32) -> Self {
        RandomStream::new(master_seed, stream_id(tag, shard))
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn seek(&mut self, counter: u128) {
        self.rng.set_word_pos(counter);
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `0..n`, by rejection above the largest multiple of `n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        if n.is_power_of_two() {
            return self.next_u64() & (n - 1);
        }
        let zone = u64::MAX - (u64::MAX - n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }
}
