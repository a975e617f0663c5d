//! Deterministic per-work-item random streams.
//!
//! Every stream is a ChaCha8 generator seeded from a hash of the master seed
//! and a path of indices (grid point, trial batch, ...). The same path always
//! yields the same stream, whatever the thread schedule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// hash(master, path[0], path[1], ...)
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(master), |h, &i| splitmix(h ^ splitmix(i.wrapping_add(GOLDEN))))
}

pub fn stream(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, path))
}
