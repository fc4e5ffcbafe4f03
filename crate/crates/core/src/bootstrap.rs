//! Nonparametric bootstrap over paired rows.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};
use crate::special::normal_quantile;
use crate::stats;

/// Confidence-interval construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum CiMethod {
    /// `original − bias ± z_{(1+level)/2} · std_error`.
    Normal,
    /// Empirical quantiles of the replicates.
    Percentile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapOptions {
    pub replicates: usize,
    pub level: f64,
    pub ci: CiMethod,
    pub seed: u64,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        Self { replicates: 1000, level: 0.95, ci: CiMethod::Normal, seed: 1 }
    }
}

/// Bootstrap summary of one statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BootstrapSummary {
    pub original: f64,
    pub bias: f64,
    pub std_error: f64,
    pub low_ci: f64,
    pub high_ci: f64,
}

impl BootstrapSummary {
    /// Summary of a statistic with no resampling information.
    pub fn point(original: f64) -> Self {
        Self { original, bias: 0.0, std_error: 0.0, low_ci: original, high_ci: original }
    }
}

/// Bootstraps a vector-valued statistic of `n` paired rows.
///
/// `statistic` receives the row indices to use: first `0..n` for the original
/// estimate, then one resample (with replacement) per replicate. Replicate `r`
/// draws its indices from its own stream, so the result does not depend on
/// evaluation order. All components share the same resamples.
pub fn bootstrap<F>(n: usize, opts: &BootstrapOptions, mut statistic: F) -> Result<Vec<BootstrapSummary>>
where
    F: FnMut(&[usize]) -> Vec<f64>,
{
    if opts.replicates < 2 {
        return Err(Error::invalid("bootstrap needs at least 2 replicates"));
    }
    if !(opts.level > 0.0 && opts.level < 1.0) {
        return Err(Error::invalid("confidence level must lie in (0, 1)"));
    }
    if n == 0 {
        return Err(Error::invalid("bootstrap needs at least one row"));
    }
    let identity: Vec<usize> = (0..n).collect();
    let original = statistic(&identity);
    let k = original.len();
    let mut draws: Vec<Vec<f64>> = vec![Vec::with_capacity(opts.replicates); k];
    let mut idx = vec![0usize; n];
    for r in 0..opts.replicates {
        let mut rng = rng::stream(opts.seed, Purpose::Bootstrap, r as u64);
        for slot in idx.iter_mut() {
            *slot = rng::index(&mut rng, n);
        }
        let t = statistic(&idx);
        for (c, v) in draws.iter_mut().zip(t) {
            c.push(v);
        }
    }
    let z = normal_quantile(0.5 * (1.0 + opts.level))?;
    Ok(original.iter().zip(&draws).map(|(&t0, reps)| summarize(t0, reps, z, opts)).collect())
}

fn summarize(t0: f64, reps: &[f64], z: f64, opts: &BootstrapOptions) -> BootstrapSummary {
    let bias = stats::mean(reps) - t0;
    let std_error = stats::std_dev(reps);
    let (low_ci, high_ci) = match opts.ci {
        CiMethod::Normal => (t0 - bias - z * std_error, t0 - bias + z * std_error),
        CiMethod::Percentile => {
            let s = stats::sorted(reps);
            let alpha = 0.5 * (1.0 - opts.level);
            (stats::quantile_sorted(&s, alpha), stats::quantile_sorted(&s, 1.0 - alpha))
        }
    };
    BootstrapSummary { original: t0, bias, std_error, low_ci, high_ci }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_statistic_collapses() {
        let s = bootstrap(10, &BootstrapOptions::default(), |_| vec![3.5]).unwrap();
        assert_eq!(s[0], BootstrapSummary::point(3.5));
    }

    #[test]
    fn guards() {
        let few = BootstrapOptions { replicates: 1, ..Default::default() };
        assert!(bootstrap(10, &few, |_| vec![0.0]).is_err());
        let bad_level = BootstrapOptions { level: 1.0, ..Default::default() };
        assert!(bootstrap(10, &bad_level, |_| vec![0.0]).is_err());
        assert!(bootstrap(0, &BootstrapOptions::default(), |_| vec![0.0]).is_err());
    }

    #[test]
    fn normal_interval_half_width() {
        let data: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin()).collect();
        let s = bootstrap(data.len(), &BootstrapOptions::default(), |idx| {
            vec![idx.iter().map(|&i| data[i]).sum::<f64>() / idx.len() as f64]
        })
        .unwrap()[0];
        let half = 0.5 * (s.high_ci - s.low_ci);
        assert!((half - 1.959_963_984_540_054 * s.std_error).abs() < 1e-12);
        assert!((0.5 * (s.high_ci + s.low_ci) - (s.original - s.bias)).abs() < 1e-12);
    }

    #[test]
    fn percentile_interval_brackets_replicates_median() {
        let data: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let opts = BootstrapOptions { ci: CiMethod::Percentile, ..Default::default() };
        let s = bootstrap(data.len(), &opts, |idx| vec![idx.iter().map(|&i| data[i]).sum::<f64>() / idx.len() as f64])
            .unwrap()[0];
        assert!(s.low_ci < s.original && s.original < s.high_ci);
    }
}
