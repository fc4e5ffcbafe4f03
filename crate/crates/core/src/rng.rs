//! Counter-based random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream keyed by
//! `(seed, purpose)` and selected by a stream index (a bootstrap replicate, a
//! permutation, a simulator site). Work units never share a stream, so results
//! do not depend on the order or the thread in which units are processed.
//!
//! Key layout: bytes 0..8 hold the user seed and bytes 8..16 the purpose tag,
//! both little-endian; the remaining key bytes are zero. The 64-bit ChaCha
//! stream id is the unit index.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Purpose tags keep streams for different jobs apart under a shared seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    MonteCarlo = 1,
    LatinHypercube = 2,
    Bootstrap = 3,
    Shapley = 4,
    ShapleyVariance = 5,
    Simulator = 6,
    GpRestarts = 7,
    InputSampling = 8,
}

pub fn stream(seed: u64, purpose: Purpose, index: u64) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// Uniform deviate in the open interval `(0, 1)`: the midpoint of one of the
/// 2^53 equal cells of the unit interval.
pub fn uniform_open<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * TWO_POW_M53
}

/// Standard normal deviate by inversion of [`uniform_open`].
pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    // uniform_open never returns 0 or 1, so the quantile is always finite
    crate::special::normal_quantile(uniform_open(rng)).unwrap_or(0.0)
}

/// Uniform index in `0..n`.
pub fn index<R: RngCore>(rng: &mut R, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Fisher–Yates shuffle.
pub fn shuffle<T, R: RngCore>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}
