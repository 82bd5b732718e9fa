//! The causal estimator family: ERM baseline, backdoor adjustment,
//! instrumental variables, double machine learning, invariant risk
//! minimisation and the length-deconfounded reward model.

mod backdoor;
mod dml;
mod erm;
mod estimate;
mod irm;
mod iv;
mod reward;

pub use backdoor::{backdoor_adjust, backdoor_ate, InterventionalMeans};
pub use dml::{cross_fit_residuals, dml_estimate, fold_assignment, DmlConfig};
pub use erm::{erm_predictor, ols_effect, regression_effect};
pub use estimate::{CausalEstimate, Method, Z_975};
pub use irm::{
    irm_fit, irm_penalty, irm_penalty_gradient, risk_scale_gradient, scaled_risk, IrmConfig, IrmFit,
};
pub use iv::{iv_estimate, iv_estimate_with_floor, WEAK_INSTRUMENT_FLOOR};
pub use reward::{
    hack_gain, reward_fit, RewardKind, RewardModel, CONTENT_COLUMN, LENGTH_COLUMN,
    PREFERENCE_COLUMN,
};

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
