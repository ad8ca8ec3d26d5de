//! Seeded random streams.
//!
//! Every stream is ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)` and switched to stream number `task`, so parallel tasks
//! draw from disjoint, reproducible sequences.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn task_rng(seed: u64, task: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Binary digits `θ_1, θ_2, ...` as 0/1 bytes, taken most significant bit first
/// from successive 64-bit outputs.
pub fn digits<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let word: u64 = rng.random();
        let take = (count - out.len()).min(64);
        out.extend((0..take).map(|b| (word >> (63 - b) & 1) as u8));
    }
    out
}
