//! Pick-freeze designs and first/total-order Sobol' index estimation.
//!
//! A design stacks `N`-row blocks `[A; B; A_B^(1); …; A_B^(d)]`, where
//! `A_B^(i)` equals `A` except for column `i`, taken from `B`. With the model
//! outputs `f(·)` of each block and `V` the unbiased variance pooled over the
//! `2N` outputs of `A` and `B`:
//!
//! * Saltelli first order: `S_i = (1/N) Σ_j f(B)_j (f(A_B^(i))_j − f(A)_j) / V`
//! * Jansen first order:   `S_i = 1 − (1/2N) Σ_j (f(B)_j − f(A_B^(i))_j)² / V`
//! * Jansen total order:   `T_i = (1/2N) Σ_j (f(A)_j − f(A_B^(i))_j)² / V`
//!
//! For inputs with a joint Gaussian law a single hybrid block cannot share
//! `X_i` with `B` and `X_~i` with `A` at the same time, so the dependent
//! layout carries two hybrid blocks per factor (see [`PickFreezeLayout`]).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bootstrap::{bootstrap, BootstrapOptions, BootstrapSummary};
use crate::error::{Error, Result};
use crate::input::{default_names, InputSpec};
use crate::linalg::Matrix;
use crate::sampling::{Generator, UnitDesign};
use crate::special::normal_quantile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum FirstOrderEstimator {
    #[default]
    Saltelli,
    Jansen,
}

impl FirstOrderEstimator {
    pub fn name(&self) -> &'static str {
        match self {
            FirstOrderEstimator::Saltelli => "saltelli",
            FirstOrderEstimator::Jansen => "jansen",
        }
    }
}

impl core::str::FromStr for FirstOrderEstimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "saltelli" => Ok(Self::Saltelli),
            "jansen" => Ok(Self::Jansen),
            other => Err(Error::invalid(alloc::format!("unknown first-order estimator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum IndexKind {
    Si,
    Ti,
}

impl IndexKind {
    pub fn name(&self) -> &'static str {
        match self {
            IndexKind::Si => "Si",
            IndexKind::Ti => "Ti",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    pub first: FirstOrderEstimator,
    /// `None` skips resampling: bias and std.error are zero and the interval
    /// collapses onto the estimate.
    pub bootstrap: Option<BootstrapOptions>,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self { first: FirstOrderEstimator::Saltelli, bootstrap: Some(BootstrapOptions::default()) }
    }
}

/// Block structure of a pick-freeze output vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PickFreezeLayout {
    pub n: usize,
    pub d: usize,
    /// `false`: `[A; B; A_B^(1..d)]`, `N(d+2)` rows.
    ///
    /// `true`: `[A; B; C_1..C_d; D_1..D_d]`, `N(2d+2)` rows, where `C_i`
    /// keeps `X_i` from `B` and redraws the other factors from their
    /// conditional law, and `D_i` keeps `X_~i` from `A` and redraws `X_i` from
    /// its conditional law. Both use the normal scores of the partner block,
    /// so under independence `C_i = D_i = A_B^(i)`.
    pub dependent: bool,
}

impl PickFreezeLayout {
    pub fn independent(n: usize, d: usize) -> Self {
        Self { n, d, dependent: false }
    }

    pub fn blocks(&self) -> usize {
        if self.dependent {
            2 * self.d + 2
        } else {
            self.d + 2
        }
    }

    pub fn total_runs(&self) -> usize {
        self.n * self.blocks()
    }

    fn first_block(&self, i: usize) -> usize {
        2 + i
    }

    fn total_block(&self, i: usize) -> usize {
        if self.dependent {
            2 + self.d + i
        } else {
            2 + i
        }
    }
}

/// Stacked pick-freeze sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PickFreezeDesign {
    rows: Matrix,
    layout: PickFreezeLayout,
}

impl PickFreezeDesign {
    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn into_rows(self) -> Matrix {
        self.rows
    }

    pub fn layout(&self) -> PickFreezeLayout {
        self.layout
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn dim(&self) -> usize {
        self.layout.d
    }

    pub fn total_runs(&self) -> usize {
        self.rows.rows()
    }

    /// Rows of block `k` (0 = A, 1 = B, 2.. hybrids).
    pub fn block(&self, k: usize) -> Matrix {
        let n = self.layout.n;
        let idx: Vec<usize> = (k * n..(k + 1) * n).collect();
        let cols: Vec<usize> = (0..self.layout.d).collect();
        self.rows.select(&idx, &cols)
    }

    /// Maps every row of an independent-layout unit design through the
    /// input marginals. Hybrid blocks keep their exact column equalities
    /// because the map acts column by column.
    pub fn scaled(&self, spec: &InputSpec) -> Result<PickFreezeDesign> {
        if !spec.is_independent() {
            return Err(Error::invalid("dependent inputs need dependent_pick_freeze, not column-wise scaling"));
        }
        Ok(PickFreezeDesign { rows: spec.scale_design(&self.rows)?, layout: self.layout })
    }
}

/// Builds `[A; B; A_B^(1); …; A_B^(d)]`.
pub fn build_pick_freeze(a: &Matrix, b: &Matrix) -> Result<PickFreezeDesign> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.rows() });
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), found: b.cols() });
    }
    let (n, d) = (a.rows(), a.cols());
    if d == 0 {
        return Err(Error::invalid("pick-freeze design needs at least one column"));
    }
    let mut data = Vec::with_capacity(n * d * (d + 2));
    data.extend_from_slice(a.as_slice());
    data.extend_from_slice(b.as_slice());
    for i in 0..d {
        for j in 0..n {
            let start = data.len();
            data.extend_from_slice(a.row(j));
            data[start + i] = b[(j, i)];
        }
    }
    Ok(PickFreezeDesign { rows: Matrix::from_vec(n * (d + 2), d, data)?, layout: PickFreezeLayout::independent(n, d) })
}

/// Pick-freeze design in input space for a joint Gaussian law, from two unit
/// designs whose coordinates become normal scores. Layout as documented on
/// [`PickFreezeLayout::dependent`].
pub fn dependent_pick_freeze(spec: &InputSpec, a: &Matrix, b: &Matrix) -> Result<PickFreezeDesign> {
    let dep = spec.dependence().ok_or_else(|| Error::invalid("dependent_pick_freeze needs a joint gaussian law"))?;
    let d = spec.dim();
    if a.cols() != d || b.cols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.cols().min(b.cols()) });
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.rows() });
    }
    let n = a.rows();
    let scores = |m: &Matrix| -> Result<Matrix> {
        let data = m.as_slice().iter().map(|&u| normal_quantile(u)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(m.rows(), m.cols(), data)
    };
    let za = scores(a)?;
    let zb = scores(b)?;
    let mut rows = Matrix::zeros(n * (2 * d + 2), d);
    for j in 0..n {
        dep.transform(za.row(j), rows.row_mut(j));
        dep.transform(zb.row(j), rows.row_mut(n + j));
    }
    for i in 0..d {
        // C_i: X_i from B, the rest conditional on it with A's scores
        let keep_i = dep.conditional(&[i])?;
        // D_i: X_~i from A, X_i conditional on them with B's score
        let others: Vec<usize> = (0..d).filter(|&k| k != i).collect();
        let redraw_i = dep.conditional(&others)?;
        for j in 0..n {
            let xb_i = rows[(n + j, i)];
            let mut x = vec![0.0; d];
            x[i] = xb_i;
            let z_rest: Vec<f64> = others.iter().map(|&k| za[(j, k)]).collect();
            keep_i.fill_free(&mut x, &z_rest);
            rows.row_mut((2 + i) * n + j).copy_from_slice(&x);

            let mut x = rows.row(j).to_vec();
            redraw_i.fill_free(&mut x, &[zb[(j, i)]]);
            rows.row_mut((2 + d + i) * n + j).copy_from_slice(&x);
        }
    }
    Ok(PickFreezeDesign { rows, layout: PickFreezeLayout { n, d, dependent: true } })
}

/// Draws `A` and `B` as the two column halves of one `N × 2d` unit design and
/// assembles the design in input space (the dependent layout when `spec`
/// carries a joint Gaussian law).
pub fn sample_pick_freeze(spec: &InputSpec, generator: Generator, n: usize, seed: u64) -> Result<PickFreezeDesign> {
    if n == 0 {
        return Err(Error::invalid("pick-freeze design needs N >= 1"));
    }
    let d = spec.dim();
    let unit = UnitDesign::generate(generator, n, 2 * d, seed)?;
    let (a, b) = unit.split_columns(d);
    if spec.is_independent() {
        build_pick_freeze(&a.points, &b.points)?.scaled(spec)
    } else {
        dependent_pick_freeze(spec, &a.points, &b.points)
    }
}

/// One row of a [`SensitivityTable`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexRow {
    pub parameter: String,
    pub kind: IndexKind,
    pub original: f64,
    pub bias: f64,
    pub std_error: f64,
    pub low_ci: f64,
    pub high_ci: f64,
}

impl IndexRow {
    fn new(parameter: String, kind: IndexKind, s: BootstrapSummary) -> Self {
        Self {
            parameter,
            kind,
            original: s.original,
            bias: s.bias,
            std_error: s.std_error,
            low_ci: s.low_ci,
            high_ci: s.high_ci,
        }
    }
}

/// First- and total-order estimates with bootstrap summaries; rows are all
/// `Si` in factor order followed by all `Ti`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SensitivityTable {
    pub rows: Vec<IndexRow>,
    pub sum_first_order: f64,
    pub total_model_runs: usize,
    pub first_estimator: FirstOrderEstimator,
    pub n: usize,
}

impl SensitivityTable {
    pub fn dim(&self) -> usize {
        self.rows.len() / 2
    }

    pub fn first(&self, i: usize) -> &IndexRow {
        &self.rows[i]
    }

    pub fn total(&self, i: usize) -> &IndexRow {
        &self.rows[self.dim() + i]
    }

    pub fn first_order(&self) -> Vec<f64> {
        self.rows[..self.dim()].iter().map(|r| r.original).collect()
    }

    pub fn total_order(&self) -> Vec<f64> {
        self.rows[self.dim()..].iter().map(|r| r.original).collect()
    }

    /// `"First-order estimator: saltelli | Total-order estimator: jansen"`.
    pub fn estimators(&self) -> String {
        alloc::format!("First-order estimator: {} | Total-order estimator: jansen", self.first_estimator.name())
    }
}

fn validate_outputs(y: &[f64], layout: &PickFreezeLayout) -> Result<()> {
    if layout.d == 0 {
        return Err(Error::invalid("pick-freeze layout needs at least one factor"));
    }
    if layout.n < 2 {
        return Err(Error::invalid("pick-freeze estimation needs N >= 2"));
    }
    if y.len() != layout.total_runs() {
        return Err(Error::DimensionMismatch { expected: layout.total_runs(), found: y.len() });
    }
    if let Some(k) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(alloc::format!("model output {k} is not finite")));
    }
    Ok(())
}

/// Unbiased variance of `f(A)` and `f(B)` pooled over the selected rows.
fn pooled_variance(y: &[f64], n: usize, idx: &[usize]) -> (f64, f64) {
    let m = 2.0 * idx.len() as f64;
    let mean = idx.iter().map(|&j| y[j] + y[n + j]).sum::<f64>() / m;
    let ss = idx
        .iter()
        .map(|&j| {
            let a = y[j] - mean;
            let b = y[n + j] - mean;
            a * a + b * b
        })
        .sum::<f64>();
    (ss / (m - 1.0), mean)
}

pub(crate) fn is_degenerate(var: f64, mean: f64) -> bool {
    var.is_nan() || var <= 1e-14 * mean * mean || var <= 0.0
}

/// Raw (unnormalized) first- and total-order numerators on the selected
/// rows: `[V_1..V_d, VT_1..VT_d]`.
pub(crate) fn partial_variances(
    y: &[f64],
    layout: &PickFreezeLayout,
    first: FirstOrderEstimator,
    idx: &[usize],
    var_y: f64,
) -> Vec<f64> {
    let n = layout.n;
    let m = idx.len() as f64;
    let mut out = vec![0.0; 2 * layout.d];
    for i in 0..layout.d {
        let c = layout.first_block(i) * n;
        let t = layout.total_block(i) * n;
        let mut s_first = 0.0;
        let mut s_total = 0.0;
        for &j in idx {
            let (fa, fb, fc, fd) = (y[j], y[n + j], y[c + j], y[t + j]);
            s_first += match first {
                FirstOrderEstimator::Saltelli => fb * (fc - fa),
                FirstOrderEstimator::Jansen => 0.5 * (fb - fc) * (fb - fc),
            };
            s_total += 0.5 * (fa - fd) * (fa - fd);
        }
        out[i] = match first {
            FirstOrderEstimator::Saltelli => s_first / m,
            FirstOrderEstimator::Jansen => var_y - s_first / m,
        };
        out[layout.d + i] = s_total / m;
    }
    out
}

/// Estimates first- and total-order indices from pick-freeze outputs.
///
/// `y` must follow the block order of `layout`; `names` labels the factors
/// (`x1..xd` when empty).
pub fn estimate_indices(
    y: &[f64],
    layout: PickFreezeLayout,
    names: &[String],
    opts: &EstimatorOptions,
) -> Result<SensitivityTable> {
    validate_outputs(y, &layout)?;
    let all: Vec<usize> = (0..layout.n).collect();
    let (v, mean) = pooled_variance(y, layout.n, &all);
    if is_degenerate(v, mean) {
        return Err(Error::DegenerateVariance);
    }
    let statistic = |idx: &[usize]| -> Vec<f64> {
        let (v, _) = pooled_variance(y, layout.n, idx);
        let mut s = partial_variances(y, &layout, opts.first, idx, v);
        s.iter_mut().for_each(|x| *x /= v);
        s
    };
    let summaries = run_bootstrap(layout.n, opts, statistic)?;
    Ok(assemble_table(&summaries, layout, names, opts.first))
}

pub(crate) fn run_bootstrap<F>(n: usize, opts: &EstimatorOptions, mut statistic: F) -> Result<Vec<BootstrapSummary>>
where
    F: FnMut(&[usize]) -> Vec<f64>,
{
    match &opts.bootstrap {
        Some(b) => bootstrap(n, b, statistic),
        None => {
            let all: Vec<usize> = (0..n).collect();
            Ok(statistic(&all).into_iter().map(BootstrapSummary::point).collect())
        }
    }
}

pub(crate) fn assemble_table(
    summaries: &[BootstrapSummary],
    layout: PickFreezeLayout,
    names: &[String],
    first: FirstOrderEstimator,
) -> SensitivityTable {
    let d = layout.d;
    let names: Vec<String> = if names.len() == d { names.to_vec() } else { default_names(d) };
    let mut rows = Vec::with_capacity(2 * d);
    for (i, s) in summaries[..d].iter().enumerate() {
        rows.push(IndexRow::new(names[i].clone(), IndexKind::Si, *s));
    }
    for (i, s) in summaries[d..2 * d].iter().enumerate() {
        rows.push(IndexRow::new(names[i].clone(), IndexKind::Ti, *s));
    }
    let sum_first_order = summaries[..d].iter().map(|s| s.original).sum();
    SensitivityTable {
        rows,
        sum_first_order,
        total_model_runs: layout.total_runs(),
        first_estimator: first,
        n: layout.n,
    }
}

/// Design, evaluation and estimation in one call.
pub fn analyze<M: crate::model::Model + ?Sized>(
    model: &M,
    spec: &InputSpec,
    generator: Generator,
    n: usize,
    seed: u64,
    opts: &EstimatorOptions,
) -> Result<SensitivityTable> {
    let design = sample_pick_freeze(spec, generator, n, seed)?;
    let y: Vec<f64> = design.rows().iter_rows().map(|r| model.eval(r)).collect();
    estimate_indices(&y, design.layout(), spec.names(), opts)
}
