//! Simulation library for evaluating causal-inference models under
//! conditionally randomized experiments.
//!
//! The central object of study is the *causal error* of a model: the gap
//! between the treatment effect the model predicts and the true effect.
//! When the true effect must itself be estimated from a conditionally
//! randomized experiment via inverse probability weighting (IPW), the
//! naive error estimate inherits the full variance of the IPW estimator.
//! The *pairs estimator* applies the same IPW functional, on the same
//! assignment realization, to both the model predictions and the ground
//! truth, so the assignment noise cancels and only the model-noise
//! component survives.
//!
//! The crate provides everything needed to reproduce that variance
//! reduction in silico:
//!
//! - [`scm_data`]: synthetic structural causal models with both potential
//!   outcomes known per unit (the simulator oracle view).
//! - [`assignment`]: RCT, logistic-propensity and random-subsampling
//!   assignment plans plus Bernoulli realizations.
//! - [`model_sim`]: hypothetical models with multiplicative prediction
//!   noise, and a small OLS T-learner for the trained-model path.
//! - [`estimators`]: every effect and causal-error estimator, plus the
//!   exact decomposition terms `f`/`g` and closed-form variances used as
//!   oracles.
//! - [`enumeration`]: exhaustive small-N enumeration over all `2^n`
//!   assignment realizations, for exact expectations and variances.
//! - [`evaluation`]: the seeded Monte-Carlo replication harness producing
//!   variance/bias/MSE tables.
//! - [`validation`]: fits the noise-modulation function V, recovers
//!   residuals and tests their independence from outcomes and assignments.
//!
//! Everything is a pure function of explicit seeds; repeated runs are
//! bit-for-bit reproducible. The crate is `no_std`-compatible (with
//! `alloc`); all IO lives in the companion CLI crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod assignment;
pub mod enumeration;
mod error;
pub mod estimators;
pub mod evaluation;
mod linalg;
mod matrix;
pub mod model_sim;
pub mod numeric;
pub mod rng;
pub mod scm_data;
pub mod special;
pub mod validation;

pub use error::Error;
pub use matrix::Matrix;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
