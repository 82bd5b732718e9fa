//! Causal statistical estimators on top of a structural-causal-model simulator.
//!
//! The crate is organised bottom-up:
//!
//! - [`scm`] defines structural causal models, samples [`Dataset`]s from them and
//!   ships the four reference models used by the demonstrations.
//! - [`numerics`] holds the dense regression primitives (QR least squares,
//!   polynomial features, logistic regression, finite-difference gradients).
//! - [`estimators`] implements the estimator family: ERM baseline, backdoor
//!   adjustment, instrumental variables, double machine learning, invariant
//!   risk minimisation and the length-deconfounded reward model.
//! - [`validate`] provides conditional-independence and invariance tests.
//! - [`experiments`] is the Monte Carlo harness plus the four demonstration drivers.
//! - [`cli`] is the command-line front end used by the `causalab` binary.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod numerics;
pub mod scm;
pub mod validate;

pub use error::{Error, Result};
pub use scm::{Dataset, Env, RngHandle, Role, ScmSpec};
