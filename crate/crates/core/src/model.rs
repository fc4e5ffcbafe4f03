//! Model evaluation traits.

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::rng::Stream;

/// A deterministic scalar model `y = f(x)`.
///
/// Implemented for every `Fn(&[f64]) -> f64`.
pub trait Model {
    fn eval(&self, x: &[f64]) -> f64;

    fn eval_rows(&self, rows: &Matrix) -> Vec<f64> {
        rows.iter_rows().map(|r| self.eval(r)).collect()
    }
}

impl<F: Fn(&[f64]) -> f64> Model for F {
    fn eval(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// A stochastic simulator: repeated calls at the same `x` give different
/// outputs, with all randomness drawn from the supplied stream.
pub trait StochasticModel {
    fn sample(&self, x: &[f64], rng: &mut Stream) -> f64;
}

impl<F: Fn(&[f64], &mut Stream) -> f64> StochasticModel for F {
    fn sample(&self, x: &[f64], rng: &mut Stream) -> f64 {
        self(x, rng)
    }
}
