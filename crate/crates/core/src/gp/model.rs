use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::kernel::{Kernel, KernelKind};
use super::optim::{nelder_mead, NelderMeadOptions};
use crate::error::{Error, Result};
use crate::linalg::{dot, Cholesky, Matrix};
use crate::rng::{self, Purpose};
use crate::sampling::lhs_sample;
use crate::stats;

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;

/// Observation noise on the training outputs.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    /// Exact observations: the emulator interpolates.
    Zero,
    /// One unknown noise variance shared by all sites, fitted by maximum
    /// likelihood as a ratio to the process variance.
    ConstantUnknown,
    /// Known per-site noise variances.
    Fixed(Vec<f64>),
}

/// Fitting controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub kernel: KernelKind,
    /// Local searches started from distinct points (the first from a fixed
    /// heuristic start, the rest Latin-hypercube draws).
    pub restarts: usize,
    pub seed: u64,
    /// Lengthscale bounds as multiples of each input column's range.
    pub lengthscale_bounds: (f64, f64),
    pub max_evals: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { kernel: KernelKind::Matern52, restarts: 5, seed: 0, lengthscale_bounds: (1e-3, 1e3), max_evals: 600 }
    }
}

/// Predictive distribution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    /// Latent variance plus `noise_var`, never negative.
    pub var: f64,
    /// Noise variance at the point; known only for constant-noise models.
    pub noise_var: f64,
}

/// Conditioned Gaussian-process emulator with a constant trend.
#[derive(Debug, Clone, PartialEq)]
pub struct GpModel {
    kernel: Kernel,
    trend: f64,
    design: Matrix,
    outputs: Vec<f64>,
    noise: Vec<f64>,
    nugget: f64,
    jitter: f64,
    factor: Cholesky,
    alpha: Vec<f64>,
    log_likelihood: f64,
}

/// Lower factor of `C = σ_f² R + diag(noise)`, adding `jitter · I` from
/// `1e-10 σ_f²` up to `1e-4 σ_f²` (×10 per step) when needed.
fn factorize(kernel: &Kernel, x: &Matrix, noise: &[f64]) -> Result<(Cholesky, f64)> {
    let n = x.rows();
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = kernel.eval(x.row(i), x.row(j));
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
        c[(i, i)] = kernel.process_variance + noise[i];
    }
    if let Ok(ch) = Cholesky::new(&c) {
        return Ok((ch, 0.0));
    }
    let mut rel = JITTER_START;
    while rel <= JITTER_MAX * (1.0 + 1e-9) {
        let jitter = rel * kernel.process_variance;
        let mut cj = c.clone();
        for i in 0..n {
            cj[(i, i)] += jitter;
        }
        if let Ok(ch) = Cholesky::new(&cj) {
            return Ok((ch, jitter));
        }
        rel *= 10.0;
    }
    Err(Error::NotPositiveDefinite)
}

struct Solved {
    trend: f64,
    alpha: Vec<f64>,
    quad: f64,
    log_det: f64,
}

/// GLS trend, `α = C⁻¹(y − μ0 1)`, the quadratic form `rᵀα` and `log|C|`.
fn solve_trend(ch: &Cholesky, y: &[f64]) -> Solved {
    let n = y.len();
    let ones = vec![1.0; n];
    let ci1 = ch.solve(&ones);
    let ciy = ch.solve(y);
    let trend = ciy.iter().sum::<f64>() / ci1.iter().sum::<f64>();
    let alpha: Vec<f64> = ciy.iter().zip(&ci1).map(|(a, b)| a - trend * b).collect();
    let quad = y.iter().zip(&alpha).map(|(yi, a)| (yi - trend) * a).sum();
    Solved { trend, alpha, quad, log_det: ch.log_det() }
}

fn gaussian_log_likelihood(s: &Solved, n: usize) -> f64 {
    -0.5 * s.quad - 0.5 * s.log_det - 0.5 * n as f64 * libm::log(2.0 * PI)
}

impl GpModel {
    /// Conditions a GP with given hyperparameters on data. `noise` holds the
    /// per-site noise variances; `nugget` is the noise variance reported by
    /// [`GpModel::predict`] away from the data (zero unless the noise is a
    /// known constant).
    pub fn condition(design: Matrix, outputs: Vec<f64>, kernel: Kernel, noise: Vec<f64>, nugget: f64) -> Result<Self> {
        let n = design.rows();
        if n == 0 {
            return Err(Error::invalid("gp needs at least one training point"));
        }
        if outputs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: outputs.len() });
        }
        if noise.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: noise.len() });
        }
        if design.cols() != kernel.dim() {
            return Err(Error::DimensionMismatch { expected: kernel.dim(), found: design.cols() });
        }
        if outputs.iter().chain(&noise).chain(design.as_slice()).any(|v| !v.is_finite())
            || noise.iter().any(|&t| t < 0.0)
        {
            return Err(Error::invalid("gp data must be finite with nonnegative noise"));
        }
        let (ch, jitter) = factorize(&kernel, &design, &noise)?;
        let s = solve_trend(&ch, &outputs);
        let log_likelihood = gaussian_log_likelihood(&s, n);
        Ok(Self {
            kernel,
            trend: s.trend,
            design,
            outputs,
            noise,
            nugget,
            jitter,
            factor: ch,
            alpha: s.alpha,
            log_likelihood,
        })
    }

    /// A model that predicts `value` everywhere with zero variance, used when
    /// the training target is constant.
    pub fn constant(design: Matrix, value: f64, kind: KernelKind) -> Result<Self> {
        let n = design.rows();
        let d = design.cols();
        let lengthscales = vec![1.0; d.max(1)];
        let kernel = Kernel::new(kind, f64::MIN_POSITIVE, lengthscales)?;
        Ok(Self {
            kernel,
            trend: value,
            factor: Cholesky::new(&Matrix::identity(n))?,
            alpha: vec![0.0; n],
            outputs: vec![value; n],
            noise: vec![0.0; n],
            nugget: 0.0,
            jitter: 0.0,
            design,
            log_likelihood: f64::INFINITY,
        })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn trend(&self) -> f64 {
        self.trend
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    pub fn outputs(&self) -> &[f64] {
        &self.outputs
    }

    /// Noise variances at the design sites.
    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    pub fn nugget(&self) -> f64 {
        self.nugget
    }

    /// Diagonal jitter added for numerical stability (zero if none).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Lower Cholesky factor of the training covariance.
    pub fn factor(&self) -> &Matrix {
        self.factor.lower()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Gaussian log marginal likelihood at the fitted hyperparameters.
    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    pub fn dim(&self) -> usize {
        self.design.cols()
    }

    /// Whether this model was built by [`GpModel::constant`].
    pub fn is_constant(&self) -> bool {
        self.log_likelihood == f64::INFINITY
    }

    fn cross(&self, x: &[f64]) -> Vec<f64> {
        self.design.iter_rows().map(|r| self.kernel.eval(x, r)).collect()
    }

    /// Posterior mean `μ0 + cᵀα`.
    pub fn predict_mean(&self, x: &[f64]) -> f64 {
        self.trend + dot(&self.cross(x), &self.alpha)
    }

    /// Posterior mean and variance `c(x,x) + τ(x) − cᵀC⁻¹c`.
    pub fn predict(&self, x: &[f64]) -> Prediction {
        let c = self.cross(x);
        let mean = self.trend + dot(&c, &self.alpha);
        let v = self.factor.solve_lower(&c);
        let latent = (self.kernel.process_variance - dot(&v, &v)).max(0.0);
        Prediction { mean, var: latent + self.nugget, noise_var: self.nugget }
    }

    /// Predictions at every row of `x`.
    pub fn predict_rows(&self, x: &Matrix) -> Vec<Prediction> {
        x.iter_rows().map(|r| self.predict(r)).collect()
    }

    /// Posterior means at every row of `x`.
    pub fn predict_mean_rows(&self, x: &Matrix) -> Vec<f64> {
        x.iter_rows().map(|r| self.predict_mean(r)).collect()
    }
}

/// Free-function form of [`GpModel::predict`].
pub fn predict(m: &GpModel, x: &[f64]) -> Prediction {
    m.predict(x)
}

struct Problem<'a> {
    x: &'a Matrix,
    y: &'a [f64],
    noise: &'a NoiseModel,
    kind: KernelKind,
    d: usize,
}

impl Problem<'_> {
    /// Hyperparameters in log space: `log ℓ_1..d`, then `log g` (constant
    /// unknown noise) or `log σ_f²` (fixed noise).
    fn unpack(&self, theta: &[f64]) -> Result<(Kernel, Vec<f64>)> {
        let ls: Vec<f64> = theta[..self.d].iter().map(|t| libm::exp(*t)).collect();
        let n = self.y.len();
        match self.noise {
            NoiseModel::Zero => Ok((Kernel::new(self.kind, 1.0, ls)?, vec![0.0; n])),
            NoiseModel::ConstantUnknown => Ok((Kernel::new(self.kind, 1.0, ls)?, vec![libm::exp(theta[self.d]); n])),
            NoiseModel::Fixed(t) => Ok((Kernel::new(self.kind, libm::exp(theta[self.d]), ls)?, t.clone())),
        }
    }

    fn concentrated(&self) -> bool {
        !matches!(self.noise, NoiseModel::Fixed(_))
    }

    /// Log likelihood with the trend (and, unless noise is fixed, the
    /// process variance) profiled out.
    fn objective(&self, theta: &[f64]) -> f64 {
        let Ok((kernel, noise)) = self.unpack(theta) else {
            return f64::NEG_INFINITY;
        };
        let Ok((ch, _)) = factorize(&kernel, self.x, &noise) else {
            return f64::NEG_INFINITY;
        };
        let s = solve_trend(&ch, self.y);
        let n = self.y.len() as f64;
        if self.concentrated() {
            let sigma2 = s.quad / n;
            if sigma2.is_nan() || sigma2 <= 0.0 {
                return f64::NEG_INFINITY;
            }
            -0.5 * n * libm::log(sigma2) - 0.5 * s.log_det - 0.5 * n * (1.0 + libm::log(2.0 * PI))
        } else {
            gaussian_log_likelihood(&s, self.y.len())
        }
    }

    fn finish(&self, theta: &[f64]) -> Result<GpModel> {
        let (kernel, noise) = self.unpack(theta)?;
        if !self.concentrated() {
            return GpModel::condition(self.x.clone(), self.y.to_vec(), kernel, noise, 0.0);
        }
        let (ch, _) = factorize(&kernel, self.x, &noise)?;
        let s = solve_trend(&ch, self.y);
        let sigma2 = s.quad / self.y.len() as f64;
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::DegenerateVariance);
        }
        let g = noise.first().copied().unwrap_or(0.0);
        let kernel = Kernel::new(self.kind, sigma2, kernel.lengthscales)?;
        let noise: Vec<f64> = noise.iter().map(|t| t * sigma2).collect();
        GpModel::condition(self.x.clone(), self.y.to_vec(), kernel, noise, g * sigma2)
    }
}

/// Maximum-likelihood fit of a constant-trend GP.
///
/// Lengthscales are searched in log space within `lengthscale_bounds` times
/// each column's range; the nugget ratio (constant unknown noise) within
/// `[1e-8, 10]`; the process variance (fixed noise) within `[1e-4, 1e4]`
/// times the output variance.
pub fn fit_gp(x: &Matrix, y: &[f64], noise: NoiseModel, opts: &FitOptions) -> Result<GpModel> {
    let (n, d) = (x.rows(), x.cols());
    if n < 2 {
        return Err(Error::invalid("gp fitting needs at least 2 points"));
    }
    if d == 0 {
        return Err(Error::invalid("gp fitting needs at least one input column"));
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    if y.iter().chain(x.as_slice()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("gp data must be finite"));
    }
    if let NoiseModel::Fixed(t) = &noise {
        if t.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: t.len() });
        }
        if t.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("fixed noise variances must be finite and nonnegative"));
        }
    }
    if opts.restarts == 0 {
        return Err(Error::invalid("gp fitting needs at least one start"));
    }
    let var_y = stats::variance(y);
    if crate::sobol::is_degenerate(var_y, stats::mean(y)) {
        return Err(Error::DegenerateVariance);
    }
    if matches!(noise, NoiseModel::Zero) && has_duplicate_rows(x) {
        return Err(Error::invalid("noise-free gp needs distinct design rows"));
    }

    let ranges: Vec<f64> = (0..d)
        .map(|j| {
            let col = x.column(j);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                hi - lo
            } else {
                1.0
            }
        })
        .collect();
    let (lo_mult, hi_mult) = opts.lengthscale_bounds;
    if !(lo_mult > 0.0 && hi_mult > lo_mult) {
        return Err(Error::invalid("lengthscale bounds must satisfy 0 < lower < upper"));
    }
    let mut lower: Vec<f64> = ranges.iter().map(|r| libm::log(lo_mult * r)).collect();
    let mut upper: Vec<f64> = ranges.iter().map(|r| libm::log(hi_mult * r)).collect();
    // starting box: a narrower band of plausible lengthscales
    let mut start_lo: Vec<f64> = ranges.iter().map(|r| libm::log(0.05 * r).max(libm::log(lo_mult * r))).collect();
    let mut start_hi: Vec<f64> = ranges.iter().map(|r| libm::log(2.0 * r).min(libm::log(hi_mult * r))).collect();
    let mut center: Vec<f64> = ranges.iter().map(|r| libm::log(0.3 * r)).collect();
    match &noise {
        NoiseModel::Zero => {}
        NoiseModel::ConstantUnknown => {
            lower.push(libm::log(1e-8));
            upper.push(libm::log(10.0));
            start_lo.push(libm::log(1e-6));
            start_hi.push(libm::log(0.5));
            center.push(libm::log(1e-2));
        }
        NoiseModel::Fixed(_) => {
            lower.push(libm::log(1e-4 * var_y));
            upper.push(libm::log(1e4 * var_y));
            start_lo.push(libm::log(0.1 * var_y));
            start_hi.push(libm::log(2.0 * var_y));
            center.push(libm::log(var_y));
        }
    }
    for ((c, lo), hi) in center.iter_mut().zip(&lower).zip(&upper) {
        *c = c.clamp(*lo, *hi);
    }

    let problem = Problem { x, y, noise: &noise, kind: opts.kernel, d };
    let mut starts = vec![center];
    if opts.restarts > 1 {
        let k = start_lo.len();
        let unit = lhs_sample(opts.restarts - 1, k, seed_for_starts(opts.seed)).points;
        for r in unit.iter_rows() {
            starts.push(r.iter().zip(start_lo.iter().zip(&start_hi)).map(|(u, (a, b))| a + u * (b - a)).collect());
        }
    }
    let nm = NelderMeadOptions { max_evals: opts.max_evals, ..Default::default() };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in &starts {
        let (theta, neg) = nelder_mead(|t| -problem.objective(t), s, &lower, &upper, &nm);
        if neg.is_finite() && best.as_ref().is_none_or(|b| neg < b.1) {
            best = Some((theta, neg));
        }
    }
    let (theta, _) = best.ok_or(Error::NotPositiveDefinite)?;
    problem.finish(&theta)
}

fn seed_for_starts(seed: u64) -> u64 {
    use rand::RngCore;
    rng::stream(seed, Purpose::GpRestarts, 0).next_u64()
}

fn has_duplicate_rows(x: &Matrix) -> bool {
    let mut rows: Vec<Vec<u64>> = x.iter_rows().map(|r| r.iter().map(|v| v.to_bits()).collect()).collect();
    rows.sort_unstable();
    rows.windows(2).any(|w| w[0] == w[1])
}
