use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Stationary covariance families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum KernelKind {
    SquaredExponential,
    #[default]
    Matern52,
}

/// `c(x, x') = σ_f² · ρ(r)` with `r` the lengthscale-weighted distance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Kernel {
    pub kind: KernelKind,
    pub process_variance: f64,
    pub lengthscales: Vec<f64>,
}

impl Kernel {
    pub fn new(kind: KernelKind, process_variance: f64, lengthscales: Vec<f64>) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(process_variance) || lengthscales.is_empty() || !lengthscales.iter().all(|&l| ok(l)) {
            return Err(Error::invalid("kernel parameters must be finite and positive"));
        }
        Ok(Self { kind, process_variance, lengthscales })
    }

    pub fn dim(&self) -> usize {
        self.lengthscales.len()
    }

    /// Correlation `c(x, x') / σ_f²`.
    pub fn correlation(&self, x: &[f64], y: &[f64]) -> f64 {
        let r2: f64 = x
            .iter()
            .zip(y)
            .zip(&self.lengthscales)
            .map(|((a, b), l)| {
                let t = (a - b) / l;
                t * t
            })
            .sum();
        match self.kind {
            KernelKind::SquaredExponential => libm::exp(-0.5 * r2),
            KernelKind::Matern52 => {
                let s5r = libm::sqrt(5.0 * r2);
                (1.0 + s5r + 5.0 * r2 / 3.0) * libm::exp(-s5r)
            }
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.process_variance * self.correlation(x, y)
    }
}

/// Free-function form of [`Kernel::eval`].
pub fn kernel_eval(k: &Kernel, x: &[f64], y: &[f64]) -> f64 {
    k.eval(x, y)
}
