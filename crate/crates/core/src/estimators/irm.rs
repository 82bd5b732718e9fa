use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{LinearFit, LossKind};
use crate::scm::Dataset;

/// Gradient-descent settings for [`irm_fit`].
///
/// The representation is linear (`h(x) = c + x·β`) and the scalar classifier
/// `w` is frozen at 1, so the penalty is the squared derivative of each
/// environment's risk with respect to `w` at `w = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrmConfig {
    /// λ, the weight on the invariance penalty.
    pub penalty_weight: f64,
    pub learning_rate: f64,
    pub iterations: usize,
    /// Every parameter starts at this value.
    pub init_scale: f64,
    /// Iterations run with the penalty weight capped at 1 before λ applies.
    pub anneal_iterations: usize,
}

impl Default for IrmConfig {
    fn default() -> Self {
        Self {
            penalty_weight: 1e4,
            learning_rate: 1e-2,
            iterations: 5000,
            init_scale: 0.01,
            anneal_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrmFit {
    pub fit: LinearFit,
    /// `Σ_e R^e + λ·penalty` at the returned parameters.
    pub objective: f64,
    pub penalty: f64,
    /// `Σ_e R^e` at the returned parameters.
    pub risk: f64,
}

struct EnvDesign {
    x: DMatrix<f64>,
    y: Vec<f64>,
}

fn env_designs(envs: &[Dataset], features: &[String]) -> Result<Vec<EnvDesign>> {
    if features.is_empty() {
        return Err(Error::config("fit has no named features"));
    }
    let outcome = envs
        .first()
        .ok_or_else(|| Error::config("no environments given"))?
        .outcome_name()?
        .to_string();
    envs.iter()
        .enumerate()
        .map(|(e, data)| {
            if data.outcome_name()? != outcome {
                return Err(Error::config(format!(
                    "environment {e} has a different outcome column"
                )));
            }
            let x = data
                .matrix(features)
                .map_err(|err| Error::config(format!("environment {e}: {err}")))?;
            Ok(EnvDesign {
                x,
                y: data.column(&outcome)?.to_vec(),
            })
        })
        .collect()
}

fn predictions(env: &EnvDesign, coefficients: &[f64], intercept: f64) -> Vec<f64> {
    (0..env.x.nrows())
        .map(|i| {
            intercept
                + coefficients
                    .iter()
                    .enumerate()
                    .map(|(j, b)| env.x[(i, j)] * b)
                    .sum::<f64>()
        })
        .collect()
}

/// Mean squared error of the scaled predictor `w·h` on `data`.
pub fn scaled_risk(fit: &LinearFit, data: &Dataset, w: f64) -> Result<f64> {
    let env = &env_designs(std::slice::from_ref(data), &fit.features)?[0];
    let h = predictions(env, &fit.coefficients, fit.intercept);
    Ok(h.iter()
        .zip(&env.y)
        .map(|(hi, yi)| (w * hi - yi).powi(2))
        .sum::<f64>()
        / h.len() as f64)
}

/// `d/dw R(w·h)` at `w = 1`, i.e. `2·mean((h − y)·h)`.
pub fn risk_scale_gradient(fit: &LinearFit, data: &Dataset) -> Result<f64> {
    if fit.loss_kind != LossKind::Squared {
        return Err(Error::config(
            "IRM penalty is defined for squared loss only",
        ));
    }
    let env = &env_designs(std::slice::from_ref(data), &fit.features)?[0];
    Ok(scale_gradient(
        env,
        &predictions(env, &fit.coefficients, fit.intercept),
    ))
}

fn scale_gradient(env: &EnvDesign, h: &[f64]) -> f64 {
    2.0 * h
        .iter()
        .zip(&env.y)
        .map(|(hi, yi)| (hi - yi) * hi)
        .sum::<f64>()
        / h.len() as f64
}

/// Invariance penalty `Σ_e (d/dw R^e(w·h) |_{w=1})²`.
pub fn irm_penalty(fit: &LinearFit, env_data: &[Dataset]) -> Result<f64> {
    if fit.loss_kind != LossKind::Squared {
        return Err(Error::config(
            "IRM penalty is defined for squared loss only",
        ));
    }
    let envs = env_designs(env_data, &fit.features)?;
    Ok(envs
        .iter()
        .map(|env| scale_gradient(env, &predictions(env, &fit.coefficients, fit.intercept)).powi(2))
        .sum())
}

/// Gradient of [`irm_penalty`] with respect to `[intercept, β…]`.
pub fn irm_penalty_gradient(fit: &LinearFit, env_data: &[Dataset]) -> Result<Vec<f64>> {
    if fit.loss_kind != LossKind::Squared {
        return Err(Error::config(
            "IRM penalty is defined for squared loss only",
        ));
    }
    let envs = env_designs(env_data, &fit.features)?;
    let mut params = Vec::with_capacity(fit.coefficients.len() + 1);
    params.push(fit.intercept);
    params.extend_from_slice(&fit.coefficients);
    Ok(penalised_terms(&envs, &params).3)
}

/// Risk, penalty and the gradient of `risk + weight·penalty` with respect to
/// `[intercept, β…]`.
fn objective_terms(envs: &[EnvDesign], params: &[f64], weight: f64) -> (f64, f64, Vec<f64>) {
    let (risk, penalty, g_risk, g_pen) = penalised_terms(envs, params);
    let grad = g_risk
        .iter()
        .zip(&g_pen)
        .map(|(r, p)| r + weight * p)
        .collect();
    (risk, penalty, grad)
}

/// Risk, penalty and their separate gradients.
fn penalised_terms(envs: &[EnvDesign], params: &[f64]) -> (f64, f64, Vec<f64>, Vec<f64>) {
    let k = params.len();
    let mut risk = 0.0;
    let mut penalty = 0.0;
    let mut grad_risk = vec![0.0; k];
    let mut grad_pen = vec![0.0; k];
    let mut g_risk = vec![0.0; k];
    let mut g_scale = vec![0.0; k];
    for env in envs {
        let n = env.y.len() as f64;
        let h = predictions(env, &params[1..], params[0]);
        g_risk.iter_mut().for_each(|g| *g = 0.0);
        g_scale.iter_mut().for_each(|g| *g = 0.0);
        let mut r_e = 0.0;
        let mut d_e = 0.0;
        for (i, (&hi, &yi)) in h.iter().zip(&env.y).enumerate() {
            let r = hi - yi;
            r_e += r * r;
            d_e += r * hi;
            // ∂R/∂θ = 2 r ∂h;  ∂D/∂θ = 2 (2h − y) ∂h
            let a = 2.0 * r;
            let b = 2.0 * (2.0 * hi - yi);
            g_risk[0] += a;
            g_scale[0] += b;
            for j in 1..k {
                let xij = env.x[(i, j - 1)];
                g_risk[j] += a * xij;
                g_scale[j] += b * xij;
            }
        }
        r_e /= n;
        d_e = 2.0 * d_e / n;
        risk += r_e;
        penalty += d_e * d_e;
        for j in 0..k {
            grad_risk[j] += g_risk[j] / n;
            grad_pen[j] += 2.0 * d_e * g_scale[j] / n;
        }
    }
    (risk, penalty, grad_risk, grad_pen)
}

/// Penalised invariant-risk fit over environments by plain gradient descent.
///
/// When λ exceeds 1 the objective is divided by λ (same minimiser, bounded
/// step sizes); the first `anneal_iterations` use weight `min(λ, 1)`.
pub fn irm_fit(
    env_data: &[Dataset],
    features: &[impl AsRef<str>],
    cfg: &IrmConfig,
) -> Result<IrmFit> {
    if env_data.len() < 2 {
        return Err(Error::config("IRM needs at least two environments"));
    }
    if !(cfg.penalty_weight >= 0.0) || !(cfg.learning_rate > 0.0) || cfg.iterations < 1 {
        return Err(Error::config(
            "IRM needs penalty_weight >= 0, learning_rate > 0 and iterations >= 1",
        ));
    }
    let names: Vec<String> = features.iter().map(|f| f.as_ref().to_string()).collect();
    let envs = env_designs(env_data, &names)?;
    let mut params = vec![cfg.init_scale; names.len() + 1];

    for it in 0..cfg.iterations {
        let weight = if it < cfg.anneal_iterations {
            cfg.penalty_weight.min(1.0)
        } else {
            cfg.penalty_weight
        };
        let scale = if weight > 1.0 { 1.0 / weight } else { 1.0 };
        let (risk, penalty, grad) = objective_terms(&envs, &params, weight);
        let value = risk + weight * penalty;
        if !value.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Convergence {
                iterations: it,
                gradient_norm: grad.iter().fold(0.0, |m, g| f64::max(m, g.abs())),
                detail: format!(
                    "IRM objective diverged; try a learning_rate below {}",
                    cfg.learning_rate
                ),
            });
        }
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= cfg.learning_rate * scale * g;
        }
    }

    let (risk, penalty, _) = objective_terms(&envs, &params, cfg.penalty_weight);
    let objective = risk + cfg.penalty_weight * penalty;
    if !objective.is_finite() {
        return Err(Error::Convergence {
            iterations: cfg.iterations,
            gradient_norm: f64::INFINITY,
            detail: "IRM objective is not finite; try a smaller learning_rate".into(),
        });
    }
    let residuals = envs
        .iter()
        .flat_map(|env| {
            let h = predictions(env, &params[1..], params[0]);
            env.y.iter().zip(h).map(|(y, h)| y - h).collect::<Vec<_>>()
        })
        .collect();
    let fit = LinearFit {
        coefficients: params[1..].to_vec(),
        intercept: params[0],
        residuals,
        loss_kind: LossKind::Squared,
        std_errors: Vec::new(),
        features: names,
    };
    Ok(IrmFit {
        fit,
        objective,
        penalty,
        risk,
    })
}
