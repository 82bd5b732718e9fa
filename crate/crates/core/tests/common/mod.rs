#![allow(dead_code)]

use std::collections::BTreeMap;

use causalab::scm::{Dataset, NodeDef, Noise, RngHandle, Role, ScmSpec};

/// `Z ~ bern(0.5)`, `X ~ bern(0.2 + 0.6Z)`, `Y = X + Z + N(0, 1)`.
pub fn discrete_backdoor_spec() -> ScmSpec {
    ScmSpec::new(
        vec![
            NodeDef::exogenous("Z", Noise::Bernoulli { q: 0.5 }),
            NodeDef::new("X", &["Z"], Noise::Uniform, |p, u, _| {
                if u < 0.2 + 0.6 * p[0] {
                    1.0
                } else {
                    0.0
                }
            }),
            NodeDef::new("Y", &["X", "Z"], Noise::gaussian(0.0, 1.0), |p, u, _| {
                p[0] + p[1] + u
            }),
        ],
        BTreeMap::new(),
    )
    .unwrap()
}

/// Exact interventional contrast and naive gap for the discrete fixture, by
/// enumerating the joint of (Z, X).
pub fn discrete_backdoor_truth() -> (f64, f64) {
    let pz = [0.5, 0.5];
    let px_given_z = |x: usize, z: usize| {
        let q = 0.2 + 0.6 * z as f64;
        if x == 1 {
            q
        } else {
            1.0 - q
        }
    };
    let ey = |x: usize, z: usize| x as f64 + z as f64;
    let interventional = |x: usize| (0..2).map(|z| pz[z] * ey(x, z)).sum::<f64>();
    let conditional = |x: usize| {
        let joint: Vec<f64> = (0..2).map(|z| pz[z] * px_given_z(x, z)).collect();
        let px: f64 = joint.iter().sum();
        (0..2).map(|z| joint[z] / px * ey(x, z)).sum::<f64>()
    };
    (
        interventional(1) - interventional(0),
        conditional(1) - conditional(0),
    )
}

/// `U, Z ~ N(0,1)`, `D = Z + U`, `Y = τD + U + ε`.
pub fn confounded_iv_spec(tau: f64) -> ScmSpec {
    ScmSpec::new(
        vec![
            NodeDef::exogenous("U", Noise::gaussian(0.0, 1.0)),
            NodeDef::exogenous("Z", Noise::gaussian(0.0, 1.0)).with_role(Role::Instrument),
            NodeDef::new("D", &["Z", "U"], Noise::None, |p, _, _| p[0] + p[1])
                .with_role(Role::Treatment),
            NodeDef::new(
                "Y",
                &["D", "U"],
                Noise::gaussian(0.0, 1.0),
                move |p, u, _| tau * p[0] + p[1] + u,
            )
            .with_role(Role::Outcome),
        ],
        BTreeMap::new(),
    )
    .unwrap()
}

/// Linear-Gaussian chain `X → Z → Y`.
pub fn chain_spec() -> ScmSpec {
    ScmSpec::new(
        vec![
            NodeDef::exogenous("X", Noise::gaussian(0.0, 1.0)),
            NodeDef::new("Z", &["X"], Noise::gaussian(0.0, 1.0), |p, u, _| {
                0.8 * p[0] + u
            }),
            NodeDef::new("Y", &["Z"], Noise::gaussian(0.0, 1.0), |p, u, _| {
                0.8 * p[0] + u
            }),
        ],
        BTreeMap::new(),
    )
    .unwrap()
}

pub fn sample(spec: &ScmSpec, n: usize, seed: u64) -> Dataset {
    spec.sample(&Default::default(), n, RngHandle::new(seed, 0))
        .unwrap()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn cov(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / (a.len() - 1) as f64
}

pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    cov(x, y) / cov(x, x)
}

/// Standard normal CDF through the error function, for closed-form checks.
pub fn phi(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

pub fn write_csv(data: &Dataset, dir: &std::path::Path, name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let file = std::fs::File::create(&path).unwrap();
    data.write_csv(file).unwrap();
    path
}
