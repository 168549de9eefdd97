//! Exact evaluation of information-density generalization bounds on finite
//! probability spaces.
//!
//! Every quantity is computed by full enumeration: distributions are
//! finite tables of log-masses, learners are stochastic kernels, and the
//! joint laws of hypothesis and data are materialised atom by atom. This
//! makes it possible to check each bound against the exact law of the
//! generalization error rather than against a sampled estimate.
//!
//! The crate is organised bottom-up:
//!
//! - [`prob`]: distributions, kernels, joint tables and log-space reductions.
//! - [`info`]: information densities, divergences, α-families, leakages and
//!   central moments, in the standard and the random-subset setting.
//! - [`models`]: loss tables, canonical learners and the two enumerable
//!   learning systems ([`StandardSystem`], [`SubsetSystem`]).
//! - [`bounds`]: closed-form bound evaluation returning [`BoundResult`]s.
//! - [`verify`]: exact coverage, exponential-inequality
//!   checks, strong converse, Hoeffding, Gaussian Monte Carlo validation.
//!
//! All logarithms are natural, so every information quantity is in nats.

pub mod bounds;
pub mod error;
pub mod info;
pub mod models;
pub mod prob;
pub mod verify;

pub use bounds::{BoundParams, BoundResult, Flavor, Order, Scope};
pub use error::{Error, Result};
pub use models::{LossTable, StandardSystem, SubsetSystem};
pub use prob::{FiniteDistribution, JointTable, Kernel};

/// Absolute tolerance applied to probability comparisons after exponentiation.
pub const PROB_TOL: f64 = 1e-12;
