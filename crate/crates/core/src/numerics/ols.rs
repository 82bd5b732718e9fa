use nalgebra::{DMatrix, DVector};

use super::{LinearFit, LossKind};
use crate::error::{Error, Result};

/// Least-squares fit of `targets` on `features` plus an intercept.
pub fn ols_fit(features: &DMatrix<f64>, targets: &[f64]) -> Result<LinearFit> {
    ols_fit_ridge(features, targets, 0.0)
}

/// Least squares with an optional ridge penalty `ridge·‖β‖²` on the slopes
/// (never on the intercept).
///
/// Columns are centred and scaled to unit norm, then solved with a
/// Householder QR; the intercept is recovered from the means.
pub fn ols_fit_ridge(features: &DMatrix<f64>, targets: &[f64], ridge: f64) -> Result<LinearFit> {
    let (n, p) = features.shape();
    if targets.len() != n {
        return Err(Error::config(format!(
            "design has {n} rows but {} targets",
            targets.len()
        )));
    }
    if n < p + 1 {
        return Err(Error::config(format!(
            "need at least {} rows for {p} features plus intercept, got {n}",
            p + 1
        )));
    }
    if !(ridge >= 0.0) {
        return Err(Error::config("ridge must be non-negative"));
    }
    if features.iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(Error::Numeric(
            "non-finite value in regression input".into(),
        ));
    }

    let nf = n as f64;
    let y_mean = targets.iter().sum::<f64>() / nf;
    let x_means: Vec<f64> = (0..p).map(|j| features.column(j).sum() / nf).collect();
    let scales: Vec<f64> = (0..p)
        .map(|j| {
            features
                .column(j)
                .iter()
                .map(|v| (v - x_means[j]).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();

    let extra = if ridge > 0.0 { p } else { 0 };
    let mut design = DMatrix::<f64>::zeros(n + extra, p);
    for j in 0..p {
        if scales[j] == 0.0 {
            if ridge == 0.0 {
                return Err(Error::Singular(format!("feature column {j} is constant")));
            }
            design[(n + j, j)] = ridge.sqrt();
            continue;
        }
        for i in 0..n {
            design[(i, j)] = (features[(i, j)] - x_means[j]) / scales[j];
        }
        if ridge > 0.0 {
            design[(n + j, j)] = ridge.sqrt() / scales[j];
        }
    }
    let mut rhs = DVector::<f64>::zeros(n + extra);
    for i in 0..n {
        rhs[i] = targets[i] - y_mean;
    }

    let (gamma, r) = if p == 0 {
        (DVector::zeros(0), DMatrix::zeros(0, 0))
    } else {
        let qr = design.qr();
        qr.q_tr_mul(&mut rhs);
        let r = qr.r();
        let max_diag = (0..p).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
        let tol = max_diag * f64::EPSILON * (n + extra).max(p) as f64 * 10.0;
        if let Some(j) = (0..p).find(|&j| r[(j, j)].abs() <= tol) {
            return Err(Error::Singular(format!(
                "design is rank deficient at column {j}"
            )));
        }
        let gamma = r
            .solve_upper_triangular(&rhs.rows(0, p).into_owned())
            .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
        (gamma, r)
    };

    let coefficients: Vec<f64> = (0..p)
        .map(|j| {
            if scales[j] == 0.0 {
                0.0
            } else {
                gamma[j] / scales[j]
            }
        })
        .collect();
    let intercept = y_mean
        - coefficients
            .iter()
            .zip(&x_means)
            .map(|(b, m)| b * m)
            .sum::<f64>();
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = (0..p).map(|j| features[(i, j)] * coefficients[j]).sum();
            targets[i] - intercept - fitted
        })
        .collect();

    let dof = n.saturating_sub(p + 1);
    let sigma2 = if dof > 0 {
        residuals.iter().map(|r| r * r).sum::<f64>() / dof as f64
    } else {
        f64::NAN
    };
    let std_errors = if p == 0 {
        Vec::new()
    } else {
        let r_inv = r
            .solve_upper_triangular(&DMatrix::identity(p, p))
            .ok_or_else(|| Error::Singular("triangular inverse failed".into()))?;
        (0..p)
            .map(|j| {
                if scales[j] == 0.0 {
                    return 0.0;
                }
                let row_norm2: f64 = r_inv.row(j).iter().map(|v| v * v).sum();
                (sigma2 * row_norm2).sqrt() / scales[j]
            })
            .collect()
    };

    Ok(LinearFit {
        coefficients,
        intercept,
        residuals,
        loss_kind: LossKind::Squared,
        std_errors,
        features: Vec::new(),
    })
}
