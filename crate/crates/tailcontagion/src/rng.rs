//! Seeded random-number streams shared by all samplers and Monte Carlo code.
//!
//! Every stochastic component in the crate draws from a ChaCha12 generator
//! addressed by a `(seed, stream)` pair. ChaCha supports 2^64 independent
//! streams per seed, so replication r of an experiment can use stream r of
//! the experiment's base seed and produce the same numbers no matter how
//! replications are scheduled.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The generator used throughout the crate.
pub type StreamRng = ChaCha12Rng;

/// Create the ChaCha12 generator for a `(seed, stream)` address.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_address_same_numbers() {
        let a: Vec<f64> = stream_rng(7, 3).random_iter().take(16).collect();
        let b: Vec<f64> = stream_rng(7, 3).random_iter().take(16).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_are_distinct() {
        let a: Vec<u64> = stream_rng(7, 0).random_iter().take(4).collect();
        let b: Vec<u64> = stream_rng(7, 1).random_iter().take(4).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn seeds_are_distinct() {
        let a: u64 = stream_rng(1, 0).random();
        let b: u64 = stream_rng(2, 0).random();
        assert_ne!(a, b);
    }
}
