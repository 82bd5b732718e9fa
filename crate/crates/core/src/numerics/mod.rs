//! Dense regression and optimisation primitives shared by the estimators.

mod fd;
mod logistic;
mod ols;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fd::fd_gradient;
pub use logistic::{logistic_fit, logistic_gradient, logistic_objective};
pub use ols::{ols_fit, ols_fit_ridge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    Squared,
    Logistic,
}

/// A fitted linear (or logistic-linear) predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    /// Training residuals `y - fitted`, on the response scale.
    pub residuals: Vec<f64>,
    pub loss_kind: LossKind,
    /// Model-based standard errors of `coefficients`.
    pub std_errors: Vec<f64>,
    /// Column names the coefficients refer to; empty for raw-matrix fits.
    pub features: Vec<String>,
}

impl LinearFit {
    pub fn with_features(mut self, names: &[impl AsRef<str>]) -> Self {
        self.features = names.iter().map(|n| n.as_ref().to_string()).collect();
        self
    }

    /// Coefficient attached to a named feature, if the fit uses it.
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.features
            .iter()
            .position(|f| f == name)
            .map(|i| self.coefficients[i])
    }

    /// Linear index `intercept + x·β` for one row.
    pub fn linear_index(&self, row: &[f64]) -> f64 {
        self.intercept
            + row
                .iter()
                .zip(&self.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>()
    }

    /// Prediction for one row: linear index, or its logistic transform.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let eta = self.linear_index(row);
        match self.loss_kind {
            LossKind::Squared => eta,
            LossKind::Logistic => sigmoid(eta),
        }
    }
}

/// Stopping rule and regularisation for iterative fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub max_iterations: usize,
    /// Sup-norm of the gradient at which the fit is declared converged.
    pub tolerance: f64,
    pub ridge: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-8,
            ridge: 0.0,
        }
    }
}

impl FitConfig {
    pub fn with_ridge(ridge: f64) -> Self {
        Self {
            ridge,
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::config("max_iterations must be at least 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::config("tolerance must be positive"));
        }
        if !(self.ridge >= 0.0) {
            return Err(Error::config("ridge must be non-negative"));
        }
        Ok(())
    }
}

pub(crate) fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// Predictions for every row of `features`.
pub fn predict(fit: &LinearFit, features: &DMatrix<f64>) -> Result<Vec<f64>> {
    if features.ncols() != fit.coefficients.len() {
        return Err(Error::config(format!(
            "fit expects {} features, got {}",
            fit.coefficients.len(),
            features.ncols()
        )));
    }
    let mut row = vec![0.0; features.ncols()];
    Ok((0..features.nrows())
        .map(|i| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = features[(i, j)];
            }
            fit.predict_row(&row)
        })
        .collect())
}

/// Columns `x, x², …, x^degree`; the intercept is left to the fit.
pub fn poly_features(x: &[f64], degree: usize) -> Result<DMatrix<f64>> {
    if degree < 1 {
        return Err(Error::config("polynomial degree must be at least 1"));
    }
    let mut m = DMatrix::zeros(x.len(), degree);
    for (i, &xi) in x.iter().enumerate() {
        let mut power = 1.0;
        for j in 0..degree {
            power *= xi;
            m[(i, j)] = power;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_rows() {
        let m = poly_features(&[2.0], 3).unwrap();
        assert_eq!(
            m.row(0).iter().copied().collect::<Vec<_>>(),
            vec![2.0, 4.0, 8.0]
        );
        let x = [0.5, -1.5, 3.0];
        let m1 = poly_features(&x, 1).unwrap();
        assert_eq!(m1.as_slice(), &x);
        assert!(poly_features(&x, 0).is_err());
    }

    fn fit(coefficients: Vec<f64>, intercept: f64, loss_kind: LossKind) -> LinearFit {
        LinearFit {
            std_errors: vec![0.0; coefficients.len()],
            coefficients,
            intercept,
            residuals: vec![],
            loss_kind,
            features: vec![],
        }
    }

    #[test]
    fn predict_affine_and_logistic() {
        let f = fit(vec![3.0], 1.0, LossKind::Squared);
        assert_eq!(
            predict(&f, &DMatrix::from_element(1, 1, 2.0)).unwrap(),
            vec![7.0]
        );
        let g = fit(vec![0.0, 0.0], 0.0, LossKind::Logistic);
        let x = DMatrix::from_fn(4, 2, |i, j| (i * 3 + j) as f64 - 2.0);
        assert!(predict(&g, &x).unwrap().iter().all(|&p| p == 0.5));
        assert!(matches!(
            predict(&g, &DMatrix::zeros(1, 3)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(800.0) == 1.0 && sigmoid(-800.0) >= 0.0);
        assert!((sigmoid(2.0) + sigmoid(-2.0) - 1.0).abs() < 1e-15);
    }
}
