//! Counter-addressed random streams.
//!
//! Every stochastic draw in a run is addressed by `(seed, round, arm,
//! channel)`. The generator is ChaCha8 keyed by the run seed, with the round
//! selecting the 64-bit stream and `(arm, channel)` selecting a block offset
//! inside that stream, so the value of a draw never depends on how many
//! other draws happened before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Channels reserved per arm; each gets its own block range.
const CHANNELS: u128 = 4;
/// Blocks of 16 words reserved for a single (arm, channel) address.
const BLOCKS_PER_ADDRESS: u128 = 64;

/// Channel used for the categorical outcome of a triggered arm.
pub const OUTCOME_CHANNEL: u64 = 0;
/// Channel used for sampled Bernoulli rewards.
pub const REWARD_CHANNEL: u64 = 1;

#[derive(Clone, Debug)]
pub struct RunRng {
    base: ChaCha8Rng,
}

impl RunRng {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn round(&self, round: u64) -> RoundDraws<'_> {
        RoundDraws { run: self, round }
    }
}

/// Draw source for a single round.
#[derive(Clone, Copy, Debug)]
pub struct RoundDraws<'a> {
    run: &'a RunRng,
    round: u64,
}

impl RoundDraws<'_> {
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Generator positioned at the block range owned by `(arm, channel)`.
    pub fn stream(&self, arm: u64, channel: u64) -> ChaCha8Rng {
        debug_assert!((channel as u128) < CHANNELS);
        let mut rng = self.run.base.clone();
        rng.set_stream(self.round);
        let address = arm as u128 * CHANNELS + channel as u128;
        rng.set_word_pos(address * BLOCKS_PER_ADDRESS * 16);
        rng
    }
}

/// Index drawn from a categorical row by inverse CDF on one uniform.
///
/// Rows that sum to slightly less than one (rounding) fall back to the last
/// index with positive mass.
pub fn categorical<R: rand::Rng + ?Sized>(rng: &mut R, row: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in row.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last_positive
}
