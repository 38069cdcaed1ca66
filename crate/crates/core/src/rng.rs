//! Counter-based variate streams.
//!
//! A draw is addressed by `(seed, stream, index)`: the ChaCha8 key comes from
//! the seed, the ChaCha stream id selects the stream and the word position is
//! derived from the index. Every index owns one fixed slot of two 64-bit words,
//! so draws can be read sequentially or out of order and always agree.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream ids of the four model inputs inside one replication.
pub mod kind {
    pub const ARRIVAL: u64 = 0;
    pub const SERVICE: u64 = 1;
    pub const PATIENCE: u64 = 2;
    pub const VACATION: u64 = 3;
    /// First id free for auxiliary use (pilot runs, bootstrap, ...).
    pub const AUX: u64 = 8;
}

const KINDS_PER_REPLICATION: u64 = 16;
const WORDS_PER_SLOT: u128 = 4;

/// Composes a ChaCha stream id from a replication number and an input kind.
pub fn stream_id(replication: u64, kind: u64) -> u64 {
    replication * KINDS_PER_REPLICATION + kind
}

#[derive(Clone, Debug)]
pub struct VariateStream {
    rng: ChaCha8Rng,
    next_index: u64,
}

impl VariateStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng.set_word_pos(0);
        Self { rng, next_index: 0 }
    }

    pub fn for_input(seed: u64, replication: u64, kind: u64) -> Self {
        Self::new(seed, stream_id(replication, kind))
    }

    /// The counter of the slot the next call to [`Self::next_uniforms`] reads.
    pub fn position(&self) -> u64 {
        self.next_index
    }

    /// Two independent uniforms on the open interval (0, 1) stored at `index`.
    pub fn uniforms_at(&mut self, index: u64) -> [f64; 2] {
        if index != self.next_index {
            self.rng.set_word_pos(index as u128 * WORDS_PER_SLOT);
            self.next_index = index;
        }
        self.next_uniforms()
    }

    pub fn next_uniforms(&mut self) -> [f64; 2] {
        let a = self.rng.next_u64();
        let b = self.rng.next_u64();
        self.next_index += 1;
        [open_unit(a), open_unit(b)]
    }
}

fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}
