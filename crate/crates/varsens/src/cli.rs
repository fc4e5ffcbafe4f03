//! Command-line interface: argument definitions and the commands behind them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use varsens_core::bootstrap::{BootstrapOptions, BootstrapSummary, CiMethod};
use varsens_core::gp::{FitOptions, GpDocument, KernelKind};
use varsens_core::shapley::{ShapleyConfig, ShapleyEstimate, ShapleyPlan};
use varsens_core::sobol::{estimate_indices, sample_pick_freeze, FirstOrderEstimator, PickFreezeLayout};
use varsens_core::stochsa::{
    analyze_replicated_runs, group_replicates, replicated_rows, run_replicates, training_sites, validate_budget,
    StochasticSaOptions, StochasticSaResult,
};
use varsens_core::testbed::{eval_model, AdditiveNoise, BenchmarkModel};
use varsens_core::{EstimatorOptions, Generator, InputSpec, Matrix, SensitivityTable};

use crate::error::{CliError, Result};
use crate::exec::ExternalModel;
use crate::io;
use crate::manifest::{self, RunManifest, MANIFEST_FILE};
use crate::plotdata;

#[derive(Debug, Clone, Parser)]
#[command(name = "varsens", version, about = "Variance-based global sensitivity analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Write a pick-freeze design in input space.
    Design(DesignArgs),
    /// Evaluate a model on every row of a design.
    Evaluate(EvaluateArgs),
    /// First- and total-order Sobol' indices.
    Sobol(SobolArgs),
    /// Shapley effects by random permutations.
    Shapley(ShapleyArgs),
    /// Sensitivity analysis of a stochastic simulator through emulators.
    Stochsa(StochsaArgs),
    /// Data behind histograms, binned scatter plots and discrepancy plots.
    Plotdata(PlotdataArgs),
    /// Re-run a recorded command and compare its outputs.
    Replay(ReplayArgs),
}

/// Where the input law and the model come from.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Input specification (JSON).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Built-in benchmark model.
    #[arg(long, conflicts_with = "exec")]
    pub model: Option<String>,
    /// Shell command reading CSV rows on stdin and printing one response per line.
    #[arg(long)]
    pub exec: Option<String>,
    /// Processes to split `--exec` evaluations across.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// linear_gaussian: standard deviation of x1.
    #[arg(long)]
    pub sigma1: Option<f64>,
    /// linear_gaussian: standard deviation of x2.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// linear_gaussian: correlation.
    #[arg(long)]
    pub rho: Option<f64>,
    /// additive_uniform: number of factors.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampler {
    Mc,
    Lhs,
    Sobol,
}

impl From<Sampler> for Generator {
    fn from(s: Sampler) -> Self {
        match s {
            Sampler::Mc => Generator::Mc,
            Sampler::Lhs => Generator::Lhs,
            Sampler::Sobol => Generator::Sobol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FirstOrder {
    Saltelli,
    Jansen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CiArg {
    Normal,
    Percentile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Matern52,
    Se,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    /// Bootstrap replicates; 0 turns the bootstrap off.
    #[arg(long = "R", default_value_t = 1000)]
    pub r: usize,
    /// Confidence level of the bootstrap intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = CiArg::Normal)]
    pub ci: CiArg,
    /// First-order estimator.
    #[arg(long, value_enum, default_value_t = FirstOrder::Saltelli)]
    pub first: FirstOrder,
}

impl EstimatorArgs {
    fn options(&self, seed: u64) -> EstimatorOptions {
        let bootstrap = (self.r > 0).then_some(BootstrapOptions {
            replicates: self.r,
            level: self.level,
            ci: match self.ci {
                CiArg::Normal => CiMethod::Normal,
                CiArg::Percentile => CiMethod::Percentile,
            },
            seed,
        });
        let first = match self.first {
            FirstOrder::Saltelli => FirstOrderEstimator::Saltelli,
            FirstOrder::Jansen => FirstOrderEstimator::Jansen,
        };
        EstimatorOptions { first, bootstrap }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Base sample size N.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Sampler::Sobol)]
    pub sampler: Sampler,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Design CSV with a header of factor names.
    #[arg(long)]
    pub design: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SobolArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Responses to a design written by `design` with the same spec and N.
    #[arg(long)]
    pub responses: Option<PathBuf>,
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Sampler::Sobol)]
    pub sampler: Sampler,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ShapleyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Random permutations M.
    #[arg(long, default_value_t = 10_000)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n_outer: usize,
    #[arg(long, default_value_t = 3)]
    pub n_inner: usize,
    /// Draws for the output variance.
    #[arg(long, default_value_t = 10_000)]
    pub n_var: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct StochsaArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Variance of Gaussian noise added to a built-in model.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Training sites of the emulators.
    #[arg(long, default_value_t = 100)]
    pub sites: usize,
    /// Simulator runs per site.
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    /// Pick-freeze base sample size on the emulators.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Sampler::Sobol)]
    pub sampler: Sampler,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Optimizer starts per likelihood fit.
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value_t = KernelArg::Matern52)]
    pub kernel: KernelArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Histogram,
    Scatterbins,
    DiscrepancyCompare,
}

#[derive(Debug, Clone, Args)]
pub struct PlotdataArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    /// Responses CSV (histogram, scatterbins).
    #[arg(long)]
    pub responses: Option<PathBuf>,
    /// Design CSV (scatterbins).
    #[arg(long)]
    pub design: Option<PathBuf>,
    /// Number of bins; 30 for histograms and 20 for scatter bins by default.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Points per design (discrepancy-compare).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Dimension (discrepancy-compare).
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Number of seeds (discrepancy-compare).
    #[arg(long, default_value_t = 50)]
    pub seeds: usize,
    /// First seed (discrepancy-compare).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
    /// Directory for the replayed outputs; a fresh temporary directory by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Files a command wrote (relative to its output directory) and the text
/// it prints.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<String>,
    pub report: String,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Design(_) => "design",
            Command::Evaluate(_) => "evaluate",
            Command::Sobol(_) => "sobol",
            Command::Shapley(_) => "shapley",
            Command::Stochsa(_) => "stochsa",
            Command::Plotdata(_) => "plotdata",
            Command::Replay(_) => "replay",
        }
    }

    pub fn out_dir(&self) -> Option<&Path> {
        match self {
            Command::Design(a) => Some(&a.out),
            Command::Evaluate(a) => Some(&a.out),
            Command::Sobol(a) => Some(&a.out),
            Command::Shapley(a) => Some(&a.out),
            Command::Stochsa(a) => Some(&a.out),
            Command::Plotdata(a) => Some(&a.out),
            Command::Replay(_) => None,
        }
    }

    fn set_out_dir(&mut self, dir: PathBuf) {
        match self {
            Command::Design(a) => a.out = dir,
            Command::Evaluate(a) => a.out = dir,
            Command::Sobol(a) => a.out = dir,
            Command::Shapley(a) => a.out = dir,
            Command::Stochsa(a) => a.out = dir,
            Command::Plotdata(a) => a.out = dir,
            Command::Replay(a) => a.out = Some(dir),
        }
    }

    fn model_args(&self) -> Option<&ModelArgs> {
        match self {
            Command::Design(a) => Some(&a.model),
            Command::Evaluate(a) => Some(&a.model),
            Command::Sobol(a) => Some(&a.model),
            Command::Shapley(a) => Some(&a.model),
            Command::Stochsa(a) => Some(&a.model),
            Command::Plotdata(_) | Command::Replay(_) => None,
        }
    }

    /// `(seed, n, bootstrap replicates)` as recorded in the manifest.
    fn settings(&self) -> (Option<u64>, Option<usize>, Option<usize>) {
        match self {
            Command::Design(a) => (Some(a.seed), Some(a.n), None),
            Command::Sobol(a) => (Some(a.seed), Some(a.n), Some(a.estimator.r)),
            Command::Shapley(a) => (Some(a.seed), Some(a.m), None),
            Command::Stochsa(a) => (Some(a.seed), Some(a.n), Some(a.estimator.r)),
            Command::Plotdata(a) => (Some(a.seed), Some(a.n), None),
            Command::Evaluate(_) | Command::Replay(_) => (None, None, None),
        }
    }
}

/// A model evaluated in-process or by an external command.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluator {
    Builtin(BenchmarkModel),
    External(ExternalModel),
}

impl Evaluator {
    pub fn evaluate(&self, names: &[String], x: &Matrix) -> Result<Vec<f64>> {
        match self {
            Evaluator::Builtin(m) => Ok(eval_model(m, x)?),
            Evaluator::External(e) => e.evaluate(names, x),
        }
    }
}

impl ModelArgs {
    pub fn builtin(&self) -> Result<Option<BenchmarkModel>> {
        let Some(name) = &self.model else { return Ok(None) };
        let model = match name.parse::<BenchmarkModel>()? {
            BenchmarkModel::LinearGaussian { sigma1, sigma2, rho } => BenchmarkModel::linear_gaussian(
                self.sigma1.unwrap_or(sigma1),
                self.sigma2.unwrap_or(sigma2),
                self.rho.unwrap_or(rho),
            )?,
            BenchmarkModel::AdditiveUniform { d } => {
                let d = self.dim.unwrap_or(d);
                if d == 0 {
                    return Err(CliError::input("--dim must be positive"));
                }
                BenchmarkModel::AdditiveUniform { d }
            }
            m => m,
        };
        Ok(Some(model))
    }

    /// The input law: `--spec` when given, otherwise the built-in model's.
    pub fn input_spec(&self) -> Result<InputSpec> {
        let builtin = self.builtin()?;
        let spec = match (&self.spec, builtin) {
            (Some(path), _) => io::read_spec(path)?,
            (None, Some(m)) => m.input_spec()?,
            (None, None) => return Err(CliError::input("an input law is needed: pass --spec or --model")),
        };
        if let Some(m) = builtin {
            if m.dim() != spec.dim() {
                return Err(CliError::input(format!(
                    "model `{}` takes {} inputs but the input spec has {}",
                    m.name(),
                    m.dim(),
                    spec.dim()
                )));
            }
        }
        Ok(spec)
    }

    pub fn evaluator(&self) -> Result<Evaluator> {
        if let Some(cmd) = &self.exec {
            return Ok(Evaluator::External(ExternalModel::new(cmd.clone(), self.jobs)));
        }
        match self.builtin()? {
            Some(m) => Ok(Evaluator::Builtin(m)),
            None => Err(CliError::input("a model is needed: pass --model or --exec")),
        }
    }
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Runs a command and, except for `replay`, records a manifest next to its
/// outputs. `args` are the command-line arguments after the program name.
pub fn run(cli: &Cli, args: &[String]) -> Result<Outcome> {
    let started_at = manifest::unix_now();
    let outcome = execute(&cli.command)?;
    let Some(out) = cli.command.out_dir() else { return Ok(outcome) };
    let (seed, n, r_bootstrap) = cli.command.settings();
    let cwd = std::env::current_dir().map_err(|e| CliError::io(".", e))?;
    let record = RunManifest {
        command: cli.command.name().to_string(),
        args: args.to_vec(),
        cwd,
        input_spec_path: cli.command.model_args().and_then(|m| m.spec.clone()),
        seed,
        n,
        r_bootstrap,
        started_at,
        finished_at: manifest::unix_now(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: manifest::digest_outputs(out, &outcome.files)?,
    };
    io::write_json(&out.join(MANIFEST_FILE), &record)?;
    Ok(outcome)
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    if let Some(out) = cmd.out_dir() {
        prepare_out(out)?;
    }
    match cmd {
        Command::Design(a) => cmd_design(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Sobol(a) => cmd_sobol(a),
        Command::Shapley(a) => cmd_shapley(a),
        Command::Stochsa(a) => cmd_stochsa(a),
        Command::Plotdata(a) => cmd_plotdata(a),
        Command::Replay(a) => cmd_replay(a),
    }
}

fn cmd_design(a: &DesignArgs) -> Result<Outcome> {
    let spec = a.model.input_spec()?;
    let design = sample_pick_freeze(&spec, a.sampler.into(), a.n, a.seed)?;
    io::write_matrix(&a.out.join("design.csv"), spec.names(), design.rows())?;
    Ok(Outcome {
        files: vec!["design.csv".into()],
        report: format!("Total number of model runs: {}\n", design.total_runs()),
    })
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<Outcome> {
    let (names, x) = io::read_matrix(&a.design)?;
    let y = a.model.evaluator()?.evaluate(&names, &x)?;
    io::write_responses(&a.out.join("responses.csv"), &y)?;
    Ok(Outcome { files: vec!["responses.csv".into()], report: format!("Evaluated {} rows\n", y.len()) })
}

fn cmd_sobol(a: &SobolArgs) -> Result<Outcome> {
    let spec = a.model.input_spec()?;
    let opts = a.estimator.options(a.seed);
    let (y, layout) = match &a.responses {
        Some(path) => {
            let y = io::read_responses(path)?;
            let layout = PickFreezeLayout { n: a.n, d: spec.dim(), dependent: !spec.is_independent() };
            if y.len() != layout.total_runs() {
                return Err(CliError::input(format!(
                    "{}: expected {} responses for N = {} and {} factors, found {}",
                    path.display(),
                    layout.total_runs(),
                    a.n,
                    spec.dim(),
                    y.len()
                )));
            }
            (y, layout)
        }
        None => {
            let design = sample_pick_freeze(&spec, a.sampler.into(), a.n, a.seed)?;
            let y = a.model.evaluator()?.evaluate(spec.names(), design.rows())?;
            (y, design.layout())
        }
    };
    let table = estimate_indices(&y, layout, spec.names(), &opts)?;
    let csv = indices_csv(&table, None);
    let json = to_json(&table)?;
    let human = sobol_table(&table, None);
    let files = write_results(&a.out, &[("indices.csv", &csv), ("indices.json", &json), ("summary.txt", &human)])?;
    Ok(Outcome { files, report: pick(a.format, human, csv, json) })
}

fn cmd_shapley(a: &ShapleyArgs) -> Result<Outcome> {
    let spec = a.model.input_spec()?;
    let cfg =
        ShapleyConfig { m_permutations: a.m, n_outer: a.n_outer, n_inner: a.n_inner, n_var: a.n_var, seed: a.seed };
    let plan = ShapleyPlan::new(&spec, &cfg)?;
    let y = a.model.evaluator()?.evaluate(spec.names(), plan.points())?;
    let est = plan.aggregate(&y)?;
    let csv = shapley_csv(&est);
    let json = to_json(&est)?;
    let human = shapley_table(&est, plan.points().rows());
    let files = write_results(&a.out, &[("shapley.csv", &csv), ("shapley.json", &json), ("summary.txt", &human)])?;
    Ok(Outcome { files, report: pick(a.format, human, csv, json) })
}

#[derive(Serialize)]
struct Emulators {
    mean: GpDocument,
    log_variance: GpDocument,
}

fn cmd_stochsa(a: &StochsaArgs) -> Result<Outcome> {
    let spec = a.model.input_spec()?;
    validate_budget(&spec, a.sites, a.replicates)?;
    let opts = StochasticSaOptions {
        n: a.n,
        generator: a.sampler.into(),
        estimator: a.estimator.options(a.seed),
        seed: a.seed,
        fit: FitOptions {
            kernel: match a.kernel {
                KernelArg::Matern52 => KernelKind::Matern52,
                KernelArg::Se => KernelKind::SquaredExponential,
            },
            restarts: a.restarts,
            seed: a.seed,
            ..FitOptions::default()
        },
    };
    let sites = training_sites(&spec, a.sites, a.seed)?;
    let runs = match (a.model.evaluator()?, a.noise) {
        (Evaluator::External(e), None) => {
            let y = e.evaluate(spec.names(), &replicated_rows(&sites, a.replicates))?;
            group_replicates(&y, a.sites, a.replicates)?
        }
        (Evaluator::External(_), Some(_)) => {
            return Err(CliError::input("--noise applies to built-in models only"));
        }
        (Evaluator::Builtin(m), None) => run_replicates(&m, &sites, a.replicates, a.seed),
        (Evaluator::Builtin(m), Some(c)) => {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(CliError::input("--noise must be a finite non-negative variance"));
            }
            run_replicates(&AdditiveNoise { model: m, variance: c }, &sites, a.replicates, a.seed)
        }
    };
    let (result, sk) = analyze_replicated_runs(&spec, sites, runs, &opts)?;
    let csv = indices_csv(&result.input_table, Some(&result.s_t_eps));
    let json = to_json(&result)?;
    let emulators =
        to_json(&Emulators { mean: sk.mean.to_document(), log_variance: sk.variance.log_model().to_document() })?;
    let human = stochsa_table(&result);
    let files = write_results(
        &a.out,
        &[("indices.csv", &csv), ("stochsa.json", &json), ("emulators.json", &emulators), ("summary.txt", &human)],
    )?;
    Ok(Outcome { files, report: pick(a.format, human, csv, json) })
}

fn cmd_plotdata(a: &PlotdataArgs) -> Result<Outcome> {
    let need = |p: &Option<PathBuf>, flag: &str| {
        p.clone().ok_or_else(|| CliError::input(format!("plotdata {:?} needs {flag}", a.kind)))
    };
    let (file, text) = match a.kind {
        PlotKind::Histogram => {
            let y = io::read_responses(&need(&a.responses, "--responses")?)?;
            let bins = plotdata::histogram(&y, a.bins.unwrap_or(plotdata::HISTOGRAM_BINS))?;
            let mut text = String::from("lower,upper,count\n");
            for b in bins {
                let _ = writeln!(text, "{},{},{}", io::fmt_float(b.lower), io::fmt_float(b.upper), b.count);
            }
            ("histogram.csv", text)
        }
        PlotKind::Scatterbins => {
            let (names, x) = io::read_matrix(&need(&a.design, "--design")?)?;
            let y = io::read_responses(&need(&a.responses, "--responses")?)?;
            let bins = plotdata::scatter_bins(&x, &names, &y, a.bins.unwrap_or(plotdata::SCATTER_BINS))?;
            let mut text = String::from("parameter,midpoint,mean,count\n");
            for b in bins {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    b.parameter,
                    io::fmt_float(b.midpoint),
                    io::fmt_float(b.mean),
                    b.count
                );
            }
            ("scatterbins.csv", text)
        }
        PlotKind::DiscrepancyCompare => {
            let rows = plotdata::discrepancy_compare(a.n, a.dim, a.seeds, a.seed)?;
            let mut text = String::from("generator,seed,discrepancy\n");
            for r in rows {
                let _ = writeln!(text, "{},{},{}", r.generator, r.seed, io::fmt_float(r.discrepancy));
            }
            ("discrepancy.csv", text)
        }
    };
    let files = write_results(&a.out, &[(file, &text)])?;
    Ok(Outcome { files, report: format!("Wrote {}\n", a.out.join(file).display()) })
}

fn cmd_replay(a: &ReplayArgs) -> Result<Outcome> {
    let record: RunManifest = io::read_json(&a.manifest)?;
    let mut argv = vec!["varsens".to_string()];
    argv.extend(record.args.iter().cloned());
    let mut cli = Cli::try_parse_from(&argv).map_err(|e| CliError::input(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::input("a replay manifest cannot itself be replayed"));
    }
    let out = match &a.out {
        Some(dir) => absolute(dir)?,
        None => std::env::temp_dir().join(format!("varsens-replay-{}-{}", std::process::id(), manifest::unix_now())),
    };
    cli.command.set_out_dir(out.clone());
    let previous = std::env::current_dir().map_err(|e| CliError::io(".", e))?;
    std::env::set_current_dir(&record.cwd).map_err(|e| CliError::io(&record.cwd, e))?;
    let result = execute(&cli.command);
    std::env::set_current_dir(&previous).map_err(|e| CliError::io(&previous, e))?;
    result?;

    let mut report = String::new();
    let mut differing = Vec::new();
    for d in &record.outputs {
        let now = manifest::sha256_file(&out.join(&d.file))?;
        let same = now == d.sha256;
        let _ = writeln!(report, "{} {}", if same { "identical" } else { "DIFFERS  " }, d.file);
        if !same {
            differing.push(d.file.clone());
        }
    }
    let _ = writeln!(report, "replayed into {}", out.display());
    if !differing.is_empty() {
        return Err(CliError::ReplayMismatch(differing.join(", ")));
    }
    Ok(Outcome { files: Vec::new(), report })
}

fn absolute(p: &Path) -> Result<PathBuf> {
    if p.is_absolute() {
        Ok(p.to_path_buf())
    } else {
        Ok(std::env::current_dir().map_err(|e| CliError::io(".", e))?.join(p))
    }
}

fn write_results(dir: &Path, files: &[(&str, &String)]) -> Result<Vec<String>> {
    for (name, text) in files {
        io::write_text(&dir.join(name), text)?;
    }
    Ok(files.iter().map(|(n, _)| n.to_string()).collect())
}

fn pick(format: Format, table: String, csv: String, json: String) -> String {
    match format {
        Format::Table => table,
        Format::Csv => csv,
        Format::Json => json,
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(v).map_err(|source| CliError::Json { path: PathBuf::from("<output>"), source })?;
    s.push('\n');
    Ok(s)
}

/// Name of the seed-variable row in stochastic tables.
pub const SEED_VARIABLE: &str = "X_eps";

fn indices_csv(t: &SensitivityTable, seed_variable: Option<&BootstrapSummary>) -> String {
    let mut s = String::from("parameter,sensitivity,original,bias,std_error,low_ci,high_ci\n");
    let f = io::fmt_float;
    for r in &t.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.parameter,
            r.kind.name(),
            f(r.original),
            f(r.bias),
            f(r.std_error),
            f(r.low_ci),
            f(r.high_ci)
        );
    }
    if let Some(e) = seed_variable {
        let _ = writeln!(
            s,
            "{SEED_VARIABLE},Ti,{},{},{},{},{}",
            f(e.original),
            f(e.bias),
            f(e.std_error),
            f(e.low_ci),
            f(e.high_ci)
        );
    }
    s
}

fn table_row(s: &mut String, k: usize, v: [f64; 5], kind: &str, name: &str) {
    let _ = writeln!(
        s,
        "{:>3}: {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>11} {:>10}",
        k, v[0], v[1], v[2], v[3], v[4], kind, name
    );
}

const HEADER: &str = "      original      bias std.error    low.ci   high.ci sensitivity parameters\n";

fn sobol_table(t: &SensitivityTable, seed_variable: Option<&BootstrapSummary>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}\n", t.estimators());
    let _ = writeln!(s, "Total number of model runs: {}\n", t.total_model_runs);
    let _ = writeln!(s, "Sum of first order indices: {:.7}", t.sum_first_order);
    s.push_str(HEADER);
    for (k, r) in t.rows.iter().enumerate() {
        table_row(&mut s, k + 1, [r.original, r.bias, r.std_error, r.low_ci, r.high_ci], r.kind.name(), &r.parameter);
    }
    if let Some(e) = seed_variable {
        table_row(
            &mut s,
            t.rows.len() + 1,
            [e.original, e.bias, e.std_error, e.low_ci, e.high_ci],
            "Ti",
            SEED_VARIABLE,
        );
    }
    s
}

fn stochsa_table(r: &StochasticSaResult) -> String {
    let mut s = sobol_table(&r.input_table, Some(&r.s_t_eps));
    let d = r.variance_decomposition;
    let _ =
        writeln!(s, "\nV(mean response): {:.3}  E(noise variance): {:.3}  total: {:.3}", d.v_mean, d.e_var, d.v_total);
    if let Some(runs) = r.simulator_runs {
        let _ = writeln!(s, "Simulator runs: {runs}");
    }
    s
}

fn shapley_csv(e: &ShapleyEstimate) -> String {
    let mut s = String::from("parameter,phi,std_error\n");
    for r in &e.rows {
        let _ = writeln!(s, "{},{},{}", r.parameter, io::fmt_float(r.phi), io::fmt_float(r.std_error));
    }
    s
}

fn shapley_table(e: &ShapleyEstimate, runs: usize) -> String {
    let mut s = format!("Total number of model runs: {runs}\n\nEstimated output variance: {:.3}\n", e.total_variance);
    s.push_str("      shapley std.error parameters\n");
    for (k, r) in e.rows.iter().enumerate() {
        let _ = writeln!(s, "{:>3}: {:>9.3} {:>9.3} {:>10}", k + 1, r.phi, r.std_error, r.parameter);
    }
    let _ = writeln!(s, "Sum of Shapley effects: {:.7}", e.rows.iter().map(|r| r.phi).sum::<f64>());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("varsens").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn linear_gaussian_parameters() {
        let Command::Shapley(a) =
            parse(&["shapley", "--model", "linear_gaussian", "--rho", "0.2", "--sigma2", "2"]).command
        else {
            panic!()
        };
        assert_eq!(
            a.model.builtin().unwrap(),
            Some(BenchmarkModel::LinearGaussian { sigma1: 1.0, sigma2: 2.0, rho: 0.2 })
        );
    }

    #[test]
    fn model_and_exec_conflict() {
        let r = Cli::try_parse_from(["varsens", "sobol", "--model", "ishigami", "--exec", "cat"]);
        assert!(r.is_err());
    }

    #[test]
    fn exec_needs_a_spec() {
        let Command::Sobol(a) = parse(&["sobol", "--exec", "cat"]).command else { panic!() };
        assert_eq!(a.model.input_spec().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn bootstrap_off() {
        let Command::Sobol(a) = parse(&["sobol", "--model", "polynomial", "--R", "0"]).command else { panic!() };
        assert!(a.estimator.options(1).bootstrap.is_none());
    }
}
