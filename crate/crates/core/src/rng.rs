//! Seeded random streams.
//!
//! Every sampler in the crate draws from [`Stream`], which is ChaCha8 keyed
//! through `SeedableRng::seed_from_u64`. The algorithm and the seeding rule are
//! fixed, so a `(seed, task)` pair names the same bit stream on every
//! platform. Independent tasks use [`stream`] with `seed ^ task`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// The stream for task `task` of an experiment seeded with `seed`.
pub fn stream(seed: u64, task: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed ^ task)
}

/// Samples handled by one parallel task. Fixed so that results do not depend
/// on the number of worker threads.
pub const CHUNK: u64 = 1 << 14;

/// Splits `samples` into `(task, len)` chunks of at most [`CHUNK`].
pub fn chunks(samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let full = samples / CHUNK;
    let rest = samples % CHUNK;
    (0..full)
        .map(|t| (t, CHUNK))
        .chain((rest > 0).then_some((full, rest)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn same_seed_same_stream() {
        let mut a = stream(42, 3);
        let mut b = stream(42, 3);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = stream(42, 4);
        assert_ne!(stream(42, 3).next_u64(), c.next_u64());
    }

    #[test]
    fn chunks_cover_samples() {
        for samples in [0, 1, CHUNK - 1, CHUNK, CHUNK + 1, 5 * CHUNK + 17] {
            let parts: Vec<_> = chunks(samples).collect();
            assert_eq!(parts.iter().map(|p| p.1).sum::<u64>(), samples);
            assert!(parts.iter().enumerate().all(|(i, p)| p.0 == i as u64));
        }
    }
}
