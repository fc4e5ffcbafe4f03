//! Stochastic kriging: replicate summaries, the mean emulator with known
//! per-site noise and a log-variance emulator for the noise level.

use alloc::vec::Vec;

use super::model::{fit_gp, FitOptions, GpModel, NoiseModel};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::special::digamma;
use crate::stats;

/// Replicated simulator outputs at distinct sites.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicatedData {
    sites: Matrix,
    replicates: Vec<Vec<f64>>,
}

impl ReplicatedData {
    pub fn new(sites: Matrix, replicates: Vec<Vec<f64>>) -> Result<Self> {
        if replicates.len() != sites.rows() {
            return Err(Error::DimensionMismatch { expected: sites.rows(), found: replicates.len() });
        }
        if let Some(site) = replicates.iter().position(|r| r.is_empty()) {
            return Err(Error::InsufficientReplicates { site, count: 0 });
        }
        if replicates.iter().flatten().chain(sites.as_slice()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("replicated data must be finite"));
        }
        let mut keys: Vec<Vec<u64>> = sites.iter_rows().map(|r| r.iter().map(|v| v.to_bits()).collect()).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("replicated data sites must be distinct"));
        }
        Ok(Self { sites, replicates })
    }

    pub fn sites(&self) -> &Matrix {
        &self.sites
    }

    pub fn replicates(&self) -> &[Vec<f64>] {
        &self.replicates
    }

    pub fn total_runs(&self) -> usize {
        self.replicates.iter().map(Vec::len).sum()
    }
}

/// Per-site replicate summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSummaries {
    pub mean_outputs: Vec<f64>,
    /// Unbiased sample variances of the replicates.
    pub noise_estimates: Vec<f64>,
    pub counts: Vec<usize>,
}

impl SiteSummaries {
    /// Noise variance of each site mean, `s² / r`.
    pub fn mean_noise(&self) -> Vec<f64> {
        self.noise_estimates.iter().zip(&self.counts).map(|(v, &r)| v / r as f64).collect()
    }
}

pub fn stochastic_kriging_noise(data: &ReplicatedData) -> Result<SiteSummaries> {
    if let Some((site, r)) = data.replicates.iter().enumerate().find(|(_, r)| r.len() < 2) {
        return Err(Error::InsufficientReplicates { site, count: r.len() });
    }
    Ok(SiteSummaries {
        mean_outputs: data.replicates.iter().map(|r| stats::mean(r)).collect(),
        noise_estimates: data.replicates.iter().map(|r| stats::variance(r)).collect(),
        counts: data.replicates.iter().map(Vec::len).collect(),
    })
}

/// `E[log s²] − log σ²` for the sample variance of `r` Gaussian replicates.
pub fn log_variance_bias(r: usize) -> f64 {
    let half = 0.5 * (r as f64 - 1.0);
    digamma(half) - libm::log(half)
}

/// Emulator of the noise variance: a GP on the log of the (floored,
/// bias-corrected) replicate variances, exponentiated on prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSurrogate {
    model: GpModel,
}

impl VarianceSurrogate {
    pub fn from_log_model(model: GpModel) -> Self {
        Self { model }
    }

    pub fn log_model(&self) -> &GpModel {
        &self.model
    }

    /// `τ̂(x) = exp(mean of the log-variance emulator)`, always positive.
    pub fn predict(&self, x: &[f64]) -> f64 {
        libm::exp(self.model.predict_mean(x))
    }

    pub fn predict_rows(&self, x: &Matrix) -> Vec<f64> {
        x.iter_rows().map(|r| self.predict(r)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceSurrogateOptions {
    /// Lower limit applied to the variance estimates before taking logs.
    pub floor: f64,
    /// Replicate count per site; when present, the known bias of the log
    /// sample variance is removed from the target.
    pub replicates: Option<Vec<usize>>,
    pub fit: FitOptions,
}

/// Fits a [`VarianceSurrogate`] to per-site variance estimates.
pub fn fit_variance_surrogate(
    x: &Matrix,
    noise_estimates: &[f64],
    opts: &VarianceSurrogateOptions,
) -> Result<VarianceSurrogate> {
    if noise_estimates.len() != x.rows() {
        return Err(Error::DimensionMismatch { expected: x.rows(), found: noise_estimates.len() });
    }
    if !(opts.floor > 0.0 && opts.floor.is_finite()) {
        return Err(Error::invalid("variance floor must be positive"));
    }
    if noise_estimates.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::invalid("variance estimates must be finite and nonnegative"));
    }
    let mut target: Vec<f64> = noise_estimates.iter().map(|v| libm::log(v.max(opts.floor))).collect();
    if let Some(counts) = &opts.replicates {
        if counts.len() != target.len() {
            return Err(Error::DimensionMismatch { expected: target.len(), found: counts.len() });
        }
        if let Some(site) = counts.iter().position(|&r| r < 2) {
            return Err(Error::InsufficientReplicates { site, count: counts[site] });
        }
        for (t, &r) in target.iter_mut().zip(counts) {
            *t -= log_variance_bias(r);
        }
    }
    let first = target[0];
    if target.iter().all(|&t| t == first) {
        return Ok(VarianceSurrogate { model: GpModel::constant(x.clone(), first, opts.fit.kernel)? });
    }
    let model = fit_gp(x, &target, NoiseModel::ConstantUnknown, &opts.fit)?;
    Ok(VarianceSurrogate { model })
}

/// Mean emulator, variance emulator and the site summaries behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticKriging {
    pub mean: GpModel,
    pub variance: VarianceSurrogate,
    pub summaries: SiteSummaries,
}

/// Fits both emulators: the mean GP with fixed noise `s²/r` at each site and
/// the log-variance GP with the floor `1e-8 · var(site means)`.
pub fn fit_stochastic_kriging(data: &ReplicatedData, fit: &FitOptions) -> Result<StochasticKriging> {
    let summaries = stochastic_kriging_noise(data)?;
    let mean = fit_gp(data.sites(), &summaries.mean_outputs, NoiseModel::Fixed(summaries.mean_noise()), fit)?;
    let spread = stats::variance(&summaries.mean_outputs);
    let floor = if spread > 0.0 { 1e-8 * spread } else { f64::MIN_POSITIVE };
    let variance = fit_variance_surrogate(
        data.sites(),
        &summaries.noise_estimates,
        &VarianceSurrogateOptions { floor, replicates: Some(summaries.counts.clone()), fit: *fit },
    )?;
    Ok(StochasticKriging { mean, variance, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hand_arithmetic() {
        let sites = Matrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let d = ReplicatedData::new(sites, vec![vec![0.0, 2.0], vec![5.0, 5.0, 5.0]]).unwrap();
        let s = stochastic_kriging_noise(&d).unwrap();
        assert_eq!(s.mean_outputs, [1.0, 5.0]);
        assert_eq!(s.noise_estimates, [2.0, 0.0]);
        assert_eq!(s.mean_noise(), [1.0, 0.0]);
        assert_eq!(d.total_runs(), 5);
    }

    #[test]
    fn replicate_guards() {
        let sites = Matrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let d = ReplicatedData::new(sites.clone(), vec![vec![0.0, 2.0], vec![5.0]]).unwrap();
        assert_eq!(stochastic_kriging_noise(&d), Err(Error::InsufficientReplicates { site: 1, count: 1 }));
        assert!(ReplicatedData::new(sites.clone(), vec![vec![0.0]]).is_err());
        let dup = Matrix::from_rows(&[[0.5], [0.5]]).unwrap();
        assert!(ReplicatedData::new(dup, vec![vec![0.0, 1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn log_bias_values() {
        // r = 2: ψ(1/2) − log(1/2) = −γ − ln 2
        assert!((log_variance_bias(2) + 0.577_215_664_901_532_9 + 2f64.ln()).abs() < 1e-12);
        assert!(log_variance_bias(20) < 0.0 && log_variance_bias(20) > -0.06);
    }

    #[test]
    fn zero_variance_sites_are_floored() {
        let x = Matrix::from_rows(&[[0.0], [0.5], [1.0], [1.5]]).unwrap();
        let opts = VarianceSurrogateOptions { floor: 1e-6, replicates: None, fit: FitOptions::default() };
        let s = fit_variance_surrogate(&x, &[0.0, 0.0, 0.0, 0.0], &opts).unwrap();
        assert!((s.predict(&[0.25]) - 1e-6).abs() < 1e-15);
        let s = fit_variance_surrogate(&x, &[0.0, 0.2, 0.1, 0.3], &opts).unwrap();
        assert!(s.predict(&[0.75]) > 0.0);
    }
}
