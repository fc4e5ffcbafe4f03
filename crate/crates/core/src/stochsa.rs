//! Sensitivity analysis of stochastic simulators.
//!
//! A stochastic simulator is a deterministic function of the inputs `X` and
//! a seed variable `X_ε`. Its mean `Y_m(x) = E[Y | X = x]` and variance
//! `Y_v(x) = V(Y | X = x)` split the output variance as
//! `V(Y) = V(Y_m) + E[Y_v]`, so the seed variable's total index is
//! `S_Tε = E[Y_v] / V(Y)` and input indices are computed on `Y_m` as
//! fractions of `V(Y)`. Both functions come from emulators fitted to
//! replicated runs (see [`crate::gp`]).

use alloc::string::String;
use alloc::vec::Vec;

use crate::bootstrap::BootstrapSummary;
use crate::error::{Error, Result};
use crate::gp::{fit_stochastic_kriging, FitOptions, GpModel, ReplicatedData, StochasticKriging, VarianceSurrogate};
use crate::input::InputSpec;
use crate::linalg::Matrix;
use crate::model::StochasticModel;
use crate::rng::{self, Purpose};
use crate::sampling::{lhs_sample, Generator};
use crate::sobol::{
    assemble_table, is_degenerate, partial_variances, run_bootstrap, sample_pick_freeze, EstimatorOptions,
    PickFreezeLayout, SensitivityTable,
};

/// `v_total = v_mean + e_var`, with `v_mean` the variance of the mean
/// response and `e_var` the mean of the noise variance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarianceDecomposition {
    pub v_mean: f64,
    pub e_var: f64,
    pub v_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StochasticSaResult {
    /// Input indices as fractions of `v_total`.
    pub input_table: SensitivityTable,
    /// Total index of the seed variable.
    pub s_t_eps: BootstrapSummary,
    pub variance_decomposition: VarianceDecomposition,
    /// Simulator calls spent on training the emulators, when known.
    pub simulator_runs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochasticSaOptions {
    /// Pick-freeze base sample size `N` (at least 1000).
    pub n: usize,
    pub generator: Generator,
    pub estimator: EstimatorOptions,
    pub seed: u64,
    pub fit: FitOptions,
}

impl Default for StochasticSaOptions {
    fn default() -> Self {
        Self {
            n: 2000,
            generator: Generator::Sobol,
            estimator: EstimatorOptions::default(),
            seed: 1,
            fit: FitOptions::default(),
        }
    }
}

/// Input indices and `S_Tε` from mean-response values `y_mean` over a
/// pick-freeze design and noise-variance values `tau` at the same rows.
///
/// `V(Y_m)` and `E[Y_v]` are both estimated on the `A` and `B` blocks. The
/// bootstrap resamples design rows jointly for all quantities.
pub fn stochastic_indices(
    y_mean: &[f64],
    tau: &[f64],
    layout: PickFreezeLayout,
    names: &[String],
    opts: &EstimatorOptions,
) -> Result<(SensitivityTable, BootstrapSummary, VarianceDecomposition)> {
    let n = layout.n;
    if y_mean.len() != layout.total_runs() {
        return Err(Error::DimensionMismatch { expected: layout.total_runs(), found: y_mean.len() });
    }
    if tau.len() != layout.total_runs() {
        return Err(Error::DimensionMismatch { expected: layout.total_runs(), found: tau.len() });
    }
    if n < 2 {
        return Err(Error::invalid("pick-freeze estimation needs N >= 2"));
    }
    if y_mean.iter().chain(tau).any(|v| !v.is_finite()) || tau.iter().any(|&t| t < 0.0) {
        return Err(Error::invalid("emulator outputs must be finite with nonnegative variance"));
    }
    let parts = |idx: &[usize]| -> (f64, f64) {
        let m = 2.0 * idx.len() as f64;
        let mean = idx.iter().map(|&j| y_mean[j] + y_mean[n + j]).sum::<f64>() / m;
        let ss: f64 = idx
            .iter()
            .map(|&j| {
                let (a, b) = (y_mean[j] - mean, y_mean[n + j] - mean);
                a * a + b * b
            })
            .sum();
        let e = idx.iter().map(|&j| tau[j] + tau[n + j]).sum::<f64>() / m;
        (ss / (m - 1.0), e)
    };
    let all: Vec<usize> = (0..n).collect();
    let (v_mean, e_var) = parts(&all);
    let v_total = v_mean + e_var;
    let mean_all = all.iter().map(|&j| y_mean[j] + y_mean[n + j]).sum::<f64>() / (2 * n) as f64;
    if v_total <= 0.0 || v_total.is_nan() || (e_var == 0.0 && is_degenerate(v_mean, mean_all)) {
        return Err(Error::DegenerateVariance);
    }
    let d = layout.d;
    let statistic = |idx: &[usize]| -> Vec<f64> {
        let (v, e) = parts(idx);
        let vt = v + e;
        let mut s = partial_variances(y_mean, &layout, opts.first, idx, v);
        s.iter_mut().for_each(|x| *x /= vt);
        s.push(e / vt);
        s
    };
    let summaries = run_bootstrap(n, opts, statistic)?;
    let table = assemble_table(&summaries[..2 * d], layout, names, opts.first);
    Ok((table, summaries[2 * d], VarianceDecomposition { v_mean, e_var, v_total }))
}

/// Sensitivity analysis on fitted mean and variance emulators.
pub fn stochastic_sobol(
    mean_model: &GpModel,
    var_model: &VarianceSurrogate,
    spec: &InputSpec,
    opts: &StochasticSaOptions,
) -> Result<StochasticSaResult> {
    if opts.n < 1000 {
        return Err(Error::invalid("stochastic analysis needs N >= 1000"));
    }
    if mean_model.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: mean_model.dim() });
    }
    let design = sample_pick_freeze(spec, opts.generator, opts.n, opts.seed)?;
    let y = mean_model.predict_mean_rows(design.rows());
    let tau = var_model.predict_rows(design.rows());
    let (input_table, s_t_eps, variance_decomposition) =
        stochastic_indices(&y, &tau, design.layout(), spec.names(), &opts.estimator)?;
    Ok(StochasticSaResult { input_table, s_t_eps, variance_decomposition, simulator_runs: None })
}

/// Training sites for the emulators: a Latin hypercube of `design_size`
/// points mapped into input space.
pub fn training_sites(spec: &InputSpec, design_size: usize, seed: u64) -> Result<Matrix> {
    let unit = lhs_sample(design_size, spec.dim(), seed);
    spec.scale_design(&unit.points)
}

/// Runs the simulator `replicates` times at every site. Site `k` draws its
/// randomness from its own stream, so runs can be distributed freely.
pub fn run_replicates<S: StochasticModel + ?Sized>(
    simulator: &S,
    sites: &Matrix,
    replicates: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    sites
        .iter_rows()
        .enumerate()
        .map(|(k, x)| {
            let mut rng = rng::stream(seed, Purpose::Simulator, k as u64);
            (0..replicates).map(|_| simulator.sample(x, &mut rng)).collect()
        })
        .collect()
}

/// Budget preconditions of [`end_to_end_stochastic_sa`]: at least 2
/// replicates and 10 sites per input.
pub fn validate_budget(spec: &InputSpec, design_size: usize, replicates: usize) -> Result<()> {
    if replicates < 2 {
        return Err(Error::invalid("replicated runs need at least 2 replicates per site"));
    }
    if design_size < 10 * spec.dim() {
        return Err(Error::invalid("training design needs at least 10 sites per input"));
    }
    Ok(())
}

/// Emulator fitting and analysis on replicated runs that were produced
/// elsewhere (`runs[k]` holds the replicates at `sites` row `k`).
pub fn analyze_replicated_runs(
    spec: &InputSpec,
    sites: Matrix,
    runs: Vec<Vec<f64>>,
    opts: &StochasticSaOptions,
) -> Result<(StochasticSaResult, StochasticKriging)> {
    let data = ReplicatedData::new(sites, runs)?;
    let total = data.total_runs();
    let sk = fit_stochastic_kriging(&data, &opts.fit)?;
    let mut result = stochastic_sobol(&sk.mean, &sk.variance, spec, opts)?;
    result.simulator_runs = Some(total);
    Ok((result, sk))
}

/// Latin-hypercube training design, replicated simulator runs, stochastic
/// kriging and emulator-based analysis.
pub fn end_to_end_stochastic_sa<S: StochasticModel + ?Sized>(
    simulator: &S,
    spec: &InputSpec,
    design_size: usize,
    replicates: usize,
    opts: &StochasticSaOptions,
) -> Result<StochasticSaResult> {
    validate_budget(spec, design_size, replicates)?;
    let sites = training_sites(spec, design_size, opts.seed)?;
    let runs = run_replicates(simulator, &sites, replicates, opts.seed);
    Ok(analyze_replicated_runs(spec, sites, runs, opts)?.0)
}

/// Rows for an external simulator: every site repeated `replicates` times
/// in a row, site by site.
pub fn replicated_rows(sites: &Matrix, replicates: usize) -> Matrix {
    let mut data = Vec::with_capacity(sites.rows() * replicates * sites.cols());
    for r in sites.iter_rows() {
        for _ in 0..replicates {
            data.extend_from_slice(r);
        }
    }
    Matrix::from_vec(sites.rows() * replicates, sites.cols(), data).expect("shape follows from the sites")
}

/// Inverse of [`replicated_rows`] for the outputs.
pub fn group_replicates(y: &[f64], sites: usize, replicates: usize) -> Result<Vec<Vec<f64>>> {
    if y.len() != sites * replicates {
        return Err(Error::DimensionMismatch { expected: sites * replicates, found: y.len() });
    }
    Ok(y.chunks(replicates.max(1)).map(<[f64]>::to_vec).collect())
}
