use alloc::vec::Vec;

use super::direction_numbers::{DIRECTION_NUMBERS, MAX_DIMENSION};
use crate::error::{Error, Result};

const BITS: usize = 32;

/// The unscrambled Sobol' sequence in Gray-code order with Joe–Kuo
/// direction numbers.
///
/// The all-zeros point of index 0 is skipped: the first emitted point is
/// `(0.5, …, 0.5)`. Conventions that include the origin are shifted by one
/// relative to this iterator.
#[derive(Debug, Clone)]
pub struct SobolSequence {
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u64,
}

impl SobolSequence {
    pub const MAX_DIMENSION: usize = MAX_DIMENSION;

    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("sobol' sequence needs at least one dimension"));
        }
        if d > MAX_DIMENSION {
            return Err(Error::TooLarge { what: "sobol' dimension", limit: MAX_DIMENSION, found: d });
        }
        let mut directions = Vec::with_capacity(d);
        let mut first = [0u32; BITS];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - k);
        }
        directions.push(first);
        for &(s, a, m) in DIRECTION_NUMBERS.iter().take(d - 1) {
            directions.push(direction_vector(s as usize, a, m));
        }
        Ok(Self { directions, state: alloc::vec![0; d], index: 0 })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Writes the next point into `out`; `None` once 2^32 − 1 points have
    /// been produced.
    pub fn next_into(&mut self, out: &mut [f64]) -> Option<()> {
        // index i produces point i+1: x_{i+1} = x_i ^ v_{c}, c = trailing ones of i
        let c = self.index.trailing_ones() as usize;
        if c >= BITS {
            return None;
        }
        for ((s, dir), o) in self.state.iter_mut().zip(&self.directions).zip(out.iter_mut()) {
            *s ^= dir[c];
            *o = *s as f64 / 4_294_967_296.0;
        }
        self.index += 1;
        Some(())
    }
}

impl Iterator for SobolSequence {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let mut p = alloc::vec![0.0; self.dim()];
        self.next_into(&mut p).map(|_| p)
    }
}

// Bratley–Fox recurrence in the Joe–Kuo formulation:
// v_k = v_{k-s} ^ (v_{k-s} >> s) ^ Σ_{j=1}^{s-1} a_j v_{k-j}
fn direction_vector(s: usize, a: u32, m: &[u32]) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    for k in 0..s.min(BITS) {
        v[k] = m[k] << (BITS - 1 - k);
    }
    for k in s..BITS {
        let mut x = v[k - s] ^ (v[k - s] >> s);
        for j in 1..s {
            if (a >> (s - 1 - j)) & 1 == 1 {
                x ^= v[k - j];
            }
        }
        v[k] = x;
    }
    v
}
