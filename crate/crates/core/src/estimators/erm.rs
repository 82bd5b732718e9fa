use crate::error::{Error, Result};
use crate::numerics::{logistic_fit, ols_fit, FitConfig, LinearFit};
use crate::scm::Dataset;

use super::{mean, CausalEstimate, Method};

/// Ridge used for the logistic ERM classifier.
pub const LOGISTIC_RIDGE: f64 = 1e-6;

/// Empirical risk minimiser on exactly the named features: least squares for
/// a continuous outcome, logistic regression for a 0/1 outcome.
pub fn erm_predictor(data: &Dataset, feature_names: &[impl AsRef<str>]) -> Result<LinearFit> {
    let outcome = data.column(data.outcome_name()?)?;
    let x = data.matrix(feature_names)?;
    let binary = outcome.iter().all(|&y| y == 0.0 || y == 1.0);
    let fit = if binary {
        logistic_fit(&x, outcome, &FitConfig::with_ridge(LOGISTIC_RIDGE))?
    } else {
        ols_fit(&x, outcome)?
    };
    Ok(fit.with_features(feature_names))
}

/// Regression coefficient of `treatment` in an OLS of `outcome` on the
/// treatment and `covariates`, with an HC0 sandwich standard error.
pub fn regression_effect(
    data: &Dataset,
    treatment: &str,
    outcome: &str,
    covariates: &[impl AsRef<str>],
) -> Result<CausalEstimate> {
    let d = data.column(treatment)?;
    let y = data.column(outcome)?;
    let n = d.len();
    // Frisch–Waugh: residualise the treatment on the covariates.
    let d_tilde: Vec<f64> = if covariates.is_empty() {
        let m = mean(d);
        d.iter().map(|v| v - m).collect()
    } else {
        ols_fit(&data.matrix(covariates)?, d)?.residuals
    };
    let mut names: Vec<&str> = vec![treatment];
    names.extend(covariates.iter().map(AsRef::as_ref));
    let full = ols_fit(&data.matrix(&names)?, y)?;
    let sxx: f64 = d_tilde.iter().map(|v| v * v).sum();
    if sxx <= 0.0 {
        return Err(Error::Degenerate("treatment has no variation".into()));
    }
    let meat: f64 = d_tilde
        .iter()
        .zip(&full.residuals)
        .map(|(v, e)| v * v * e * e)
        .sum();
    CausalEstimate::new(full.coefficients[0], meat.sqrt() / sxx, Method::Erm, n)
}

/// Naive slope of `y` on `d` with an HC0 standard error.
pub fn ols_effect(d: &[f64], y: &[f64]) -> Result<CausalEstimate> {
    let data = Dataset::from_columns([("d", d.to_vec()), ("y", y.to_vec())])?;
    regression_effect(&data, "d", "y", &[] as &[&str])
}
