//! Gaussian-process emulators.
//!
//! A GP with constant trend `μ0` and kernel `c` conditioned on design `X_n`
//! and outputs `Y_n` predicts
//!
//! * mean `μ(x) = μ0 + c(x)ᵀ C⁻¹ (Y_n − μ0 1)`,
//! * variance `σ²(x) = c(x, x) + τ(x) − c(x)ᵀ C⁻¹ c(x)`,
//!
//! with `C_kl = c(x_k, x_l) + δ_kl τ(x_k)` and `τ` the noise variance.

mod kernel;
mod model;
mod optim;
mod stochastic;

pub use kernel::{kernel_eval, Kernel, KernelKind};
pub use model::{fit_gp, predict, FitOptions, GpModel, NoiseModel, Prediction};
pub use optim::{nelder_mead, NelderMeadOptions};
pub use stochastic::{
    fit_stochastic_kriging, fit_variance_surrogate, log_variance_bias, stochastic_kriging_noise, ReplicatedData,
    SiteSummaries, StochasticKriging, VarianceSurrogate, VarianceSurrogateOptions,
};

use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::Matrix;

/// Plain-data form of a [`GpModel`]: hyperparameters and training data. The
/// factorization is recomputed on load.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GpDocument {
    pub kernel: Kernel,
    pub trend: f64,
    pub design: Vec<Vec<f64>>,
    pub outputs: Vec<f64>,
    pub noise: Vec<f64>,
    pub nugget: f64,
    /// Set for models that predict a constant.
    #[cfg_attr(feature = "serde", serde(default))]
    pub constant: bool,
}

impl GpModel {
    pub fn to_document(&self) -> GpDocument {
        GpDocument {
            kernel: self.kernel().clone(),
            trend: self.trend(),
            design: self.design().iter_rows().map(<[f64]>::to_vec).collect(),
            outputs: self.outputs().to_vec(),
            noise: self.noise().to_vec(),
            nugget: self.nugget(),
            constant: self.is_constant(),
        }
    }

    pub fn from_document(doc: &GpDocument) -> Result<GpModel> {
        let design =
            if doc.design.is_empty() { Matrix::zeros(0, doc.kernel.dim()) } else { Matrix::from_rows(&doc.design)? };
        if doc.constant {
            return GpModel::constant(design, doc.trend, doc.kernel.kind);
        }
        GpModel::condition(design, doc.outputs.clone(), doc.kernel.clone(), doc.noise.clone(), doc.nugget)
    }
}
