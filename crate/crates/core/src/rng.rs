//! Seeded randomness. Every stream is ChaCha8 keyed by a 64-bit seed, and
//! per-item seeds are derived with a splitmix64 step so results do not
//! depend on how work is split between threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Generator = ChaCha8Rng;

pub fn generator(seed: u64) -> Generator {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of item `index` in a stream keyed by `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard normal pair by the Box–Muller transform.
pub fn normal_pair(rng: &mut Generator) -> (f64, f64) {
    // u1 in (0, 1] keeps the logarithm finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = std::f64::consts::TAU * u2;
    (r * th.cos(), r * th.sin())
}
