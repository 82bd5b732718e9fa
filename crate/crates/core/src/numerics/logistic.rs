use nalgebra::{DMatrix, DVector};

use super::{sigmoid, FitConfig, LinearFit, LossKind};
use crate::error::{Error, Result};

fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

fn linear_index(features: &DMatrix<f64>, params: &[f64], i: usize) -> f64 {
    params[0]
        + (0..features.ncols())
            .map(|j| features[(i, j)] * params[j + 1])
            .sum::<f64>()
}

/// Mean negative log-likelihood plus `ridge/2 · ‖β‖²`, with
/// `params = [intercept, β…]`.
pub fn logistic_objective(
    features: &DMatrix<f64>,
    labels: &[f64],
    params: &[f64],
    ridge: f64,
) -> f64 {
    let n = labels.len() as f64;
    let nll: f64 = labels
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let eta = linear_index(features, params, i);
            softplus(eta) - y * eta
        })
        .sum::<f64>()
        / n;
    nll + 0.5 * ridge * params[1..].iter().map(|b| b * b).sum::<f64>()
}

/// Analytic gradient of [`logistic_objective`].
pub fn logistic_gradient(
    features: &DMatrix<f64>,
    labels: &[f64],
    params: &[f64],
    ridge: f64,
) -> Vec<f64> {
    let n = labels.len() as f64;
    let p = features.ncols();
    let mut grad = vec![0.0; p + 1];
    for (i, &y) in labels.iter().enumerate() {
        let r = sigmoid(linear_index(features, params, i)) - y;
        grad[0] += r;
        for j in 0..p {
            grad[j + 1] += r * features[(i, j)];
        }
    }
    for g in grad.iter_mut() {
        *g /= n;
    }
    for j in 0..p {
        grad[j + 1] += ridge * params[j + 1];
    }
    grad
}

/// Ridge-regularised maximum-likelihood logistic regression by damped Newton
/// steps with step halving.
pub fn logistic_fit(features: &DMatrix<f64>, labels: &[f64], cfg: &FitConfig) -> Result<LinearFit> {
    cfg.validate()?;
    let (n, p) = features.shape();
    if labels.len() != n {
        return Err(Error::config(format!(
            "design has {n} rows but {} labels",
            labels.len()
        )));
    }
    if labels.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(Error::config("logistic labels must be 0 or 1"));
    }
    let positives = labels.iter().filter(|&&y| y == 1.0).count();
    if positives == 0 || positives == n {
        return Err(Error::config("logistic fit needs samples of both classes"));
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite feature value".into()));
    }

    let k = p + 1;
    let mut params = vec![0.0; k];
    params[0] = (positives as f64 / (n - positives) as f64).ln();
    let mut objective = logistic_objective(features, labels, &params, cfg.ridge);
    let mut grad_norm = f64::INFINITY;

    for iteration in 0..cfg.max_iterations {
        let grad = logistic_gradient(features, labels, &params, cfg.ridge);
        grad_norm = grad.iter().fold(0.0, |m, g| f64::max(m, g.abs()));
        if cfg.ridge == 0.0 && separates(features, labels, &params) {
            return Err(Error::Convergence {
                iterations: iteration,
                gradient_norm: grad_norm,
                detail: "classes are perfectly separated; add a ridge penalty".into(),
            });
        }
        if grad_norm <= cfg.tolerance {
            return Ok(finish(features, labels, params));
        }

        let hessian = hessian(features, &params, cfg.ridge, false);
        let step = solve_spd(hessian, DVector::from_vec(grad.clone()))?;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            let trial: Vec<f64> = params
                .iter()
                .zip(step.iter())
                .map(|(t, s)| t - scale * s)
                .collect();
            let value = logistic_objective(features, labels, &trial, cfg.ridge);
            if value.is_finite() && value <= objective + 1e-14 * objective.abs() {
                params = trial;
                objective = value;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let grad = logistic_gradient(features, labels, &params, cfg.ridge);
    let final_norm = grad.iter().fold(0.0, |m, g| f64::max(m, g.abs()));
    if final_norm <= cfg.tolerance {
        return Ok(finish(features, labels, params));
    }
    Err(Error::Convergence {
        iterations: cfg.max_iterations,
        gradient_norm: final_norm.min(grad_norm),
        detail: "logistic regression did not reach the gradient tolerance".into(),
    })
}

fn separates(features: &DMatrix<f64>, labels: &[f64], params: &[f64]) -> bool {
    labels.iter().enumerate().all(|(i, &y)| {
        let eta = linear_index(features, params, i);
        if y == 1.0 {
            eta > 0.0
        } else {
            eta < 0.0
        }
    })
}

/// Hessian of the mean objective, or the unscaled Fisher information when
/// `information` is set.
fn hessian(features: &DMatrix<f64>, params: &[f64], ridge: f64, information: bool) -> DMatrix<f64> {
    let (n, p) = features.shape();
    let k = p + 1;
    let mut h = DMatrix::<f64>::zeros(k, k);
    let mut row = vec![1.0; k];
    for i in 0..n {
        for j in 0..p {
            row[j + 1] = features[(i, j)];
        }
        let mu = sigmoid(linear_index(features, params, i));
        let w = mu * (1.0 - mu);
        for a in 0..k {
            let wa = w * row[a];
            for b in a..k {
                h[(a, b)] += wa * row[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            h[(a, b)] = h[(b, a)];
        }
    }
    if !information {
        h /= n as f64;
        for j in 1..k {
            h[(j, j)] += ridge;
        }
    }
    h
}

fn solve_spd(mut h: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
    let trace = h.trace().abs().max(1e-300);
    for attempt in 0..6 {
        if let Some(chol) = h.clone().cholesky() {
            return Ok(chol.solve(&rhs));
        }
        let jitter = trace * 1e-12 * 10f64.powi(attempt * 2);
        for j in 0..h.nrows() {
            h[(j, j)] += jitter;
        }
    }
    Err(Error::Singular(
        "logistic Hessian is not positive definite".into(),
    ))
}

fn finish(features: &DMatrix<f64>, labels: &[f64], params: Vec<f64>) -> LinearFit {
    let info = hessian(features, &params, 0.0, true);
    let k = params.len();
    let std_errors = match info.clone().cholesky() {
        Some(chol) => {
            let inv = chol.inverse();
            (1..k).map(|j| inv[(j, j)].max(0.0).sqrt()).collect()
        }
        None => vec![f64::INFINITY; k - 1],
    };
    let residuals = labels
        .iter()
        .enumerate()
        .map(|(i, &y)| y - sigmoid(linear_index(features, &params, i)))
        .collect();
    LinearFit {
        intercept: params[0],
        coefficients: params[1..].to_vec(),
        residuals,
        loss_kind: LossKind::Logistic,
        std_errors,
        features: Vec::new(),
    }
}
