//! The four reference models used by the demonstrations.
//!
//! Noise scales and feature geometry that the demonstrations leave open are
//! fixed here; the constants below are the calibrated values.

use std::collections::BTreeMap;
use std::sync::Arc;

use statrs::distribution::{ContinuousCDF, Normal};

use super::model::{Env, NodeDef, Noise, ScmSpec};
use super::Role;
use crate::error::{Error, Result};

/// Noise sd shared by η, ξ and ε in the spurious-sign model.
pub const DEMO1_NOISE_SD: f64 = 0.2;

/// Class-mean separation μ/σ of the shape and colour features.
pub const DEMO2_SIGNAL_TO_NOISE: f64 = 2.0;

/// Accuracy of the Bayes classifier that sees only the shape feature.
pub const DEMO2_SHAPE_ACCURACY: f64 = 0.85;

pub const DEMO3_TAU: f64 = 0.5;

pub const DEMO4_CONTENT_NOISE_VAR: f64 = 0.25;
pub const DEMO4_PROXY_NOISE_VAR: f64 = 0.25;
pub const DEMO4_LENGTH_NOISE_VAR: f64 = 0.3;

/// Label-flip probability for the shape feature such that
/// `(1 - f) Φ(μ/σ) + f (1 - Φ(μ/σ)) = 0.85`.
pub fn demo2_shape_flip() -> f64 {
    let a = std_normal_cdf(DEMO2_SIGNAL_TO_NOISE);
    (a - DEMO2_SHAPE_ACCURACY) / (2.0 * a - 1.0)
}

pub(crate) fn std_normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

fn required(names: &[&str]) -> BTreeMap<String, Option<f64>> {
    names.iter().map(|n| (n.to_string(), None)).collect()
}

/// Spurious-sign model: `U, Z ~ N(0,1)`, `X_causal = U + η`,
/// `X_spur = s_e·Z + ξ`, `Y = 2U + Z + ε`, with environment parameter `s_e`.
pub fn demo1_spec() -> ScmSpec {
    let s = DEMO1_NOISE_SD;
    let nodes = vec![
        NodeDef::exogenous("U", Noise::gaussian(0.0, 1.0)),
        NodeDef::exogenous("Z", Noise::gaussian(0.0, 1.0)).with_role(Role::Covariate),
        NodeDef::new("X_causal", &["U"], Noise::gaussian(0.0, s), |p, u, _| {
            p[0] + u
        })
        .with_role(Role::Causal),
        NodeDef::new("X_spur", &["Z"], Noise::gaussian(0.0, s), |p, u, e| {
            e["s_e"] * p[0] + u
        })
        .with_env_params(&["s_e"])
        .with_role(Role::Spurious),
        NodeDef::new("Y", &["U", "Z"], Noise::gaussian(0.0, s), |p, u, _| {
            2.0 * p[0] + p[1] + u
        })
        .with_role(Role::Outcome),
    ];
    ScmSpec::new(nodes, required(&["s_e"])).expect("demo 1 model is well formed")
}

pub fn demo1_env(sign: f64) -> Env {
    [("s_e".to_string(), sign)].into()
}

/// Shape/colour classification model with environment parameter `p`, the
/// probability that the colour label agrees with `Y`.
pub fn demo2_spec() -> ScmSpec {
    let mu = DEMO2_SIGNAL_TO_NOISE;
    let flip = demo2_shape_flip();
    let nodes = vec![
        NodeDef::exogenous("Y", Noise::Bernoulli { q: 0.5 }).with_role(Role::Outcome),
        NodeDef::new(
            "Y_shape",
            &["Y"],
            Noise::Bernoulli { q: flip },
            |p, u, _| {
                if u == 1.0 {
                    1.0 - p[0]
                } else {
                    p[0]
                }
            },
        ),
        NodeDef::new("Y_colour", &["Y"], Noise::Uniform, |p, u, e| {
            if u < 1.0 - e["p"] {
                1.0 - p[0]
            } else {
                p[0]
            }
        })
        .with_env_params(&["p"]),
        NodeDef::new(
            "shape",
            &["Y_shape"],
            Noise::gaussian(0.0, 1.0),
            move |p, u, _| (2.0 * p[0] - 1.0) * mu + u,
        )
        .with_role(Role::Causal),
        NodeDef::new(
            "colour",
            &["Y_colour"],
            Noise::gaussian(0.0, 1.0),
            move |p, u, _| (2.0 * p[0] - 1.0) * mu + u,
        )
        .with_role(Role::Spurious),
    ];
    ScmSpec::new(nodes, required(&["p"])).expect("demo 2 model is well formed")
}

pub fn demo2_env(p: f64) -> Env {
    [("p".to_string(), p)].into()
}

/// `g₀(x) = sin x + x²/2`.
pub fn demo3_outcome_nuisance(x: f64) -> f64 {
    x.sin() + 0.5 * x * x
}

/// `m₀(x) = 0.7x + tanh x`.
pub fn demo3_treatment_nuisance(x: f64) -> f64 {
    0.7 * x + x.tanh()
}

/// Partially linear model `D = m₀(X) + V`, `Y = τD + g₀(X) + ε` with τ = 0.5.
pub fn demo3_spec() -> ScmSpec {
    demo3_spec_with(demo3_outcome_nuisance, demo3_treatment_nuisance)
}

/// Partially linear model with custom nuisance functions.
pub fn demo3_spec_with<G, M>(outcome_nuisance: G, treatment_nuisance: M) -> ScmSpec
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
    M: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let g = Arc::new(outcome_nuisance);
    let m = Arc::new(treatment_nuisance);
    let nodes = vec![
        NodeDef::exogenous("X", Noise::gaussian(0.0, 1.0)).with_role(Role::Covariate),
        NodeDef::new("D", &["X"], Noise::gaussian(0.0, 1.0), move |p, u, _| {
            m(p[0]) + u
        })
        .with_role(Role::Treatment),
        NodeDef::new(
            "Y",
            &["D", "X"],
            Noise::gaussian(0.0, 1.0),
            move |p, u, _| DEMO3_TAU * p[0] + g(p[1]) + u,
        )
        .with_role(Role::Outcome),
    ];
    ScmSpec::new(nodes, BTreeMap::new()).expect("demo 3 model is well formed")
}

/// Reward-hacking model: engagement `U` drives content `C` and length `L`;
/// the preference `Y = 2C + ε` ignores length; `C_hat` is a noisy content proxy.
pub fn demo4_spec() -> ScmSpec {
    let nodes = vec![
        NodeDef::exogenous("U", Noise::gaussian(0.0, 1.0)),
        NodeDef::new(
            "C",
            &["U"],
            Noise::gaussian(0.0, DEMO4_CONTENT_NOISE_VAR.sqrt()),
            |p, u, _| p[0] + u,
        ),
        NodeDef::new(
            "L",
            &["U"],
            Noise::gaussian(0.0, DEMO4_LENGTH_NOISE_VAR.sqrt()),
            |p, u, _| p[0] + u,
        )
        .with_role(Role::Covariate),
        NodeDef::new(
            "C_hat",
            &["C"],
            Noise::gaussian(0.0, DEMO4_PROXY_NOISE_VAR.sqrt()),
            |p, u, _| p[0] + u,
        )
        .with_role(Role::Covariate),
        NodeDef::new("Y", &["C"], Noise::gaussian(0.0, 1.0), |p, u, _| {
            2.0 * p[0] + u
        })
        .with_role(Role::Outcome),
    ];
    ScmSpec::new(nodes, BTreeMap::new()).expect("demo 4 model is well formed")
}

/// Symmetric table of population second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl MomentTable {
    pub fn get(&self, a: &str, b: &str) -> Result<f64> {
        let idx = |n: &str| {
            self.names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::config(format!("no moment for `{n}`")))
        };
        Ok(self.values[idx(a)?][idx(b)?])
    }
}

/// Exact population covariance of `(X_causal, X_spur, Z, Y)` for the
/// spurious-sign model.
pub fn population_moments_demo1(env: &Env) -> Result<MomentTable> {
    let s = *env
        .get("s_e")
        .ok_or_else(|| Error::config("missing environment parameter `s_e`"))?;
    if s != 1.0 && s != -1.0 {
        return Err(Error::config(format!("s_e must be +1 or -1, got {s}")));
    }
    let v = DEMO1_NOISE_SD * DEMO1_NOISE_SD;
    // Var(U)=Var(Z)=1; the noises are independent of everything else.
    let values = vec![
        vec![1.0 + v, 0.0, 0.0, 2.0],
        vec![0.0, s * s + v, s, s],
        vec![0.0, s, 1.0, 1.0],
        vec![2.0, s, 1.0, 4.0 + 1.0 + v],
    ];
    Ok(MomentTable {
        names: ["X_causal", "X_spur", "Z", "Y"].map(String::from).to_vec(),
        values,
    })
}
