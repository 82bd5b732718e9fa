//! Backdoor adjustment on a binary treatment confounded by a binary covariate.
//!
//! cargo run --example backdoor_adjustment

use std::collections::BTreeMap;

use causalab::estimators::{backdoor_adjust, backdoor_ate, ols_effect};
use causalab::scm::{NodeDef, Noise, RngHandle, ScmSpec};

fn main() -> causalab::Result<()> {
    let spec = ScmSpec::new(
        vec![
            NodeDef::exogenous("Z", Noise::Bernoulli { q: 0.5 }),
            NodeDef::new("X", &["Z"], Noise::Uniform, |p, u, _| {
                f64::from(u < 0.2 + 0.6 * p[0])
            }),
            NodeDef::new("Y", &["X", "Z"], Noise::gaussian(0.0, 1.0), |p, u, _| {
                p[0] + p[1] + u
            }),
        ],
        BTreeMap::new(),
    )?;
    let data = spec.sample(&Default::default(), 100_000, RngHandle::new(1, 0))?;

    let naive = ols_effect(data.column("X")?, data.column("Y")?)?;
    let means = backdoor_adjust(&data, "X", "Y", "Z", 10)?;
    let est = backdoor_ate(&data, "X", "Y", "Z", 10)?;
    println!("difference in means: {:.3}", naive.tau_hat);
    println!(
        "E[Y | do(X=1)] = {:.3}, E[Y | do(X=0)] = {:.3}",
        means.treated, means.control
    );
    println!(
        "adjusted ATE: {:.3}  95% CI [{:.3}, {:.3}]",
        est.tau_hat, est.ci_low, est.ci_high
    );
    Ok(())
}
