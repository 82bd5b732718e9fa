//! Invariant risk minimisation across two environments in which a spurious
//! feature flips its relation to the outcome.
//!
//! cargo run --release --example invariant_risk

use causalab::estimators::{erm_predictor, irm_fit, irm_penalty, IrmConfig};
use causalab::scm::{demo1_env, demo1_spec, RngHandle};
use causalab::Dataset;

fn main() -> causalab::Result<()> {
    let spec = demo1_spec();
    let rng = RngHandle::new(5, 0);
    let envs = vec![
        spec.sample(&demo1_env(1.0), 3000, rng.derive("plus"))?,
        spec.sample(&demo1_env(-1.0), 3000, rng.derive("minus"))?,
    ];
    let features = ["X_causal", "X_spur"];

    let single = erm_predictor(&envs[0], &features)?;
    let pooled = erm_predictor(&Dataset::concat(&envs)?, &features)?;
    println!("ERM, one environment: {:?}", single.coefficients);
    println!("  penalty across both: {:.3}", irm_penalty(&single, &envs)?);
    println!("ERM, pooled:          {:?}", pooled.coefficients);
    for lambda in [0.0, 1.0, 100.0, 1e4] {
        let cfg = IrmConfig {
            penalty_weight: lambda,
            ..IrmConfig::default()
        };
        let fit = irm_fit(&envs, &features, &cfg)?;
        println!(
            "IRM lambda {lambda:>7}: coefficients {:?}, penalty {:.2e}",
            fit.fit.coefficients, fit.penalty
        );
    }
    Ok(())
}
