//! Variance-based global sensitivity analysis for black-box models.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! * input-space descriptions with independent marginals or a joint Gaussian
//!   law ([`input`]),
//! * unit-cube designs: Monte Carlo, Latin hypercube and the Sobol' sequence,
//!   plus the L2-star discrepancy ([`sampling`]),
//! * pick-freeze designs with Saltelli/Jansen estimators of first and total
//!   order Sobol' indices and bootstrap intervals ([`sobol`], [`bootstrap`]),
//! * Shapley effects for dependent inputs ([`shapley`]),
//! * Gaussian-process emulators with stochastic kriging ([`gp`]) and the
//!   seed-variable analysis of stochastic simulators built on them
//!   ([`stochsa`]),
//! * benchmark models with closed-form indices ([`testbed`]).
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bootstrap;
pub mod error;
pub mod gp;
pub mod input;
pub mod linalg;
pub mod model;
pub mod rng;
pub mod sampling;
pub mod shapley;
pub mod sobol;
pub mod special;
pub mod stats;
pub mod stochsa;
pub mod testbed;

pub use error::{Error, Result};
pub use input::{GaussianDependence, InputSpec, Marginal};
pub use linalg::Matrix;
pub use model::{Model, StochasticModel};
pub use sampling::{Generator, UnitDesign};
pub use sobol::{EstimatorOptions, PickFreezeDesign, SensitivityTable};
