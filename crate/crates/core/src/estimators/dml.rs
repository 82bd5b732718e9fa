use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ols_fit_ridge, poly_features};
use crate::scm::{Dataset, RngHandle, Role};

use super::{CausalEstimate, Method};

/// Nuisance and cross-fitting choices for [`dml_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmlConfig {
    /// Degree of the polynomial used for both nuisance regressions.
    pub poly_degree: usize,
    pub n_folds: usize,
    pub ridge: f64,
    /// Clamp held-out covariate values to the training fold's range before
    /// evaluating the polynomial nuisances.
    pub clip_to_training_range: bool,
}

impl Default for DmlConfig {
    fn default() -> Self {
        Self {
            poly_degree: 5,
            n_folds: 5,
            ridge: 1e-8,
            clip_to_training_range: true,
        }
    }
}

impl DmlConfig {
    fn validate(&self) -> Result<()> {
        if self.n_folds < 2 {
            return Err(Error::config("n_folds must be at least 2"));
        }
        if self.poly_degree < 1 {
            return Err(Error::config("poly_degree must be at least 1"));
        }
        if !(self.ridge >= 0.0) {
            return Err(Error::config("ridge must be non-negative"));
        }
        Ok(())
    }
}

/// Random balanced split of `0..n` into `k` folds (indices sorted within each fold).
pub fn fold_assignment(n: usize, k: usize, rng: RngHandle) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng.rng());
    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (pos, &i) in order.iter().enumerate() {
        folds[pos % k].push(i);
    }
    for f in folds.iter_mut() {
        f.sort_unstable();
    }
    folds
}

/// Out-of-fold residuals `target − f̂(x)` for each target, where `f̂` is a
/// degree-`degree` polynomial least-squares fit on the complement of each fold.
pub fn cross_fit_residuals(
    x: &[f64],
    targets: &[&[f64]],
    folds: &[Vec<usize>],
    degree: usize,
    ridge: f64,
    clip: bool,
) -> Result<Vec<Vec<f64>>> {
    let n = x.len();
    let mut out = vec![vec![0.0; n]; targets.len()];
    let mut in_fold = vec![usize::MAX; n];
    for (k, fold) in folds.iter().enumerate() {
        for &i in fold {
            in_fold[i] = k;
        }
    }
    if in_fold.contains(&usize::MAX) {
        return Err(Error::config("folds do not cover every row"));
    }
    for (k, fold) in folds.iter().enumerate() {
        let train: Vec<usize> = (0..n).filter(|&i| in_fold[i] != k).collect();
        if train.len() < degree + 2 || fold.is_empty() {
            return Err(Error::config(format!(
                "fold {k} leaves {} training rows, too few for a degree-{degree} polynomial",
                train.len()
            )));
        }
        let x_train: Vec<f64> = train.iter().map(|&i| x[i]).collect();
        let (lo, hi) = x_train
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        let x_eval: Vec<f64> = fold
            .iter()
            .map(|&i| if clip { x[i].clamp(lo, hi) } else { x[i] })
            .collect();
        let design = poly_features(&x_train, degree)?;
        let eval = poly_features(&x_eval, degree)?;
        for (t, target) in targets.iter().enumerate() {
            let y_train: Vec<f64> = train.iter().map(|&i| target[i]).collect();
            let fit = ols_fit_ridge(&design, &y_train, ridge)?;
            for (row, &i) in fold.iter().enumerate() {
                let pred = fit.intercept
                    + (0..degree)
                        .map(|j| eval[(row, j)] * fit.coefficients[j])
                        .sum::<f64>();
                out[t][i] = target[i] - pred;
            }
        }
    }
    Ok(out)
}

/// Cross-fitted double machine learning estimate of τ in the partially
/// linear model `Y = τD + g₀(X) + ε`, `D = m₀(X) + V`.
///
/// Treatment, outcome and a single scalar covariate are taken from the
/// dataset's roles. Residuals `V̂ = D − m̂(X)` and `Ŷ = Y − ĝ(X)` are formed
/// out of fold and pooled into `τ̂ = Σ V̂Ŷ / Σ V̂²`; the standard error is the
/// orthogonal-score sandwich `sqrt(mean(V̂²ε̂²) / mean(V̂²)² / n)`, inflated by
/// `n / (n − 2(degree + 1))`.
pub fn dml_estimate(data: &Dataset, cfg: &DmlConfig, rng: RngHandle) -> Result<CausalEstimate> {
    cfg.validate()?;
    let d = data.column(data.single_with_role(Role::Treatment)?)?;
    let y = data.column(data.outcome_name()?)?;
    let x = data.column(data.single_with_role(Role::Covariate)?)?;
    let n = data.n();
    if n < 10 * cfg.n_folds {
        return Err(Error::config(format!(
            "DML with {} folds needs at least {} rows, got {n}",
            cfg.n_folds,
            10 * cfg.n_folds
        )));
    }
    let folds = fold_assignment(n, cfg.n_folds, rng.derive("dml-folds"));
    let residuals = cross_fit_residuals(
        x,
        &[d, y],
        &folds,
        cfg.poly_degree,
        cfg.ridge,
        cfg.clip_to_training_range,
    )?;
    let (v, y_res) = (&residuals[0], &residuals[1]);

    let svv: f64 = v.iter().map(|a| a * a).sum();
    let sdd: f64 = d.iter().map(|a| a * a).sum();
    if !(svv > 1e-12 * sdd.max(1e-300)) {
        return Err(Error::Degenerate(
            "treatment residuals vanish; the covariate explains the treatment".into(),
        ));
    }
    let svy: f64 = v.iter().zip(y_res).map(|(a, b)| a * b).sum();
    let tau = svy / svv;

    let nf = n as f64;
    let j = svv / nf;
    let meat: f64 = v
        .iter()
        .zip(y_res)
        .map(|(vi, yi)| {
            let e = yi - tau * vi;
            vi * vi * e * e
        })
        .sum::<f64>()
        / nf;
    // Degrees-of-freedom correction for the two polynomial nuisance fits.
    let fitted = 2 * (cfg.poly_degree + 1);
    let dof = nf / (nf - fitted as f64);
    let se = (dof * meat / (j * j) / nf).sqrt();
    CausalEstimate::new(tau, se, Method::Dml, n)
}
