//! Tables behind the uncertainty histogram, the binned scatter plots and
//! the design-discrepancy comparison.

use serde::Serialize;
use varsens_core::sampling::{design_discrepancy, UnitDesign};
use varsens_core::{Generator, Matrix};

use crate::error::{CliError, Result};

pub const HISTOGRAM_BINS: usize = 30;
pub const SCATTER_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterBin {
    pub parameter: String,
    pub midpoint: f64,
    pub mean: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyRow {
    pub generator: &'static str,
    pub seed: u64,
    pub discrepancy: f64,
}

fn check_bins(bins: usize) -> Result<()> {
    if bins < 2 {
        return Err(CliError::input("at least 2 bins are required"));
    }
    Ok(())
}

/// Equal-width bins over `[lo, hi]`; a degenerate range is widened by one
/// unit so that constant data still lands in a bin.
fn edges(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn bin_of(v: f64, lo: f64, width: f64, bins: usize) -> usize {
    (((v - lo) / width) as usize).min(bins - 1)
}

fn range(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.is_empty() {
        return Err(CliError::input("no responses to bin"));
    }
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(CliError::input("responses must be finite"));
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(edges(lo, hi))
}

pub fn histogram(y: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    check_bins(bins)?;
    let (lo, hi) = range(y)?;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in y {
        counts[bin_of(v, lo, width, bins)] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            lower: lo + k as f64 * width,
            upper: if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width },
            count,
        })
        .collect())
}

/// Mean of `y` within equal-width bins of each input column. Empty bins
/// are left out.
pub fn scatter_bins(x: &Matrix, names: &[String], y: &[f64], bins: usize) -> Result<Vec<ScatterBin>> {
    check_bins(bins)?;
    if x.rows() != y.len() {
        return Err(CliError::input(format!("{} design rows but {} responses", x.rows(), y.len())));
    }
    range(y)?;
    let mut out = Vec::new();
    for (j, name) in names.iter().enumerate().take(x.cols()) {
        let col = x.column(j);
        let (lo, hi) = range(&col)?;
        let width = (hi - lo) / bins as f64;
        let mut sums = vec![0.0; bins];
        let mut counts = vec![0usize; bins];
        for (v, yv) in col.iter().zip(y) {
            let k = bin_of(*v, lo, width, bins);
            sums[k] += yv;
            counts[k] += 1;
        }
        for k in 0..bins {
            if counts[k] > 0 {
                out.push(ScatterBin {
                    parameter: name.clone(),
                    midpoint: lo + (k as f64 + 0.5) * width,
                    mean: sums[k] / counts[k] as f64,
                    count: counts[k],
                });
            }
        }
    }
    Ok(out)
}

/// L2-star discrepancy of Monte Carlo, Latin hypercube and Sobol' designs
/// of `n` points in `[0, 1)^d` for seeds `first_seed..first_seed+seeds`.
pub fn discrepancy_compare(n: usize, d: usize, seeds: usize, first_seed: u64) -> Result<Vec<DiscrepancyRow>> {
    if n == 0 || d == 0 || seeds == 0 {
        return Err(CliError::input("n, dimension and number of seeds must be positive"));
    }
    let mut rows = Vec::with_capacity(3 * seeds);
    for generator in [Generator::Mc, Generator::Lhs, Generator::Sobol] {
        for s in 0..seeds as u64 {
            let seed = first_seed + s;
            let design = UnitDesign::generate(generator, n, d, seed)?;
            rows.push(DiscrepancyRow { generator: generator.name(), seed, discrepancy: design_discrepancy(&design) });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_conserves_counts() {
        let y: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64).collect();
        let h = histogram(&y, HISTOGRAM_BINS).unwrap();
        assert_eq!(h.len(), 30);
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 1000);
        assert_eq!(h[0].lower, 0.0);
        assert_eq!(h[29].upper, 100.0);
    }

    #[test]
    fn constant_responses() {
        let x = Matrix::from_rows(&[[0.1], [0.5], [0.9], [0.3]]).unwrap();
        let y = [2.5; 4];
        let bins = scatter_bins(&x, &["a".into()], &y, 5).unwrap();
        assert!(bins.iter().all(|b| b.mean == 2.5));
        let h = histogram(&y, 2).unwrap();
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 4);
    }

    #[test]
    fn empty_and_bad_bins() {
        assert!(histogram(&[], 10).is_err());
        assert!(histogram(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn discrepancy_rows() {
        let rows = discrepancy_compare(16, 2, 3, 7).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[2].seed, 9);
        assert!(rows.iter().all(|r| r.discrepancy > 0.0));
    }
}
