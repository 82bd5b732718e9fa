//! Wald/IV estimate under unobserved confounding, next to the biased OLS slope.
//!
//! cargo run --example instrumental_variable

use std::collections::BTreeMap;

use causalab::estimators::{iv_estimate, ols_effect};
use causalab::scm::{NodeDef, Noise, RngHandle, ScmSpec};

fn main() -> causalab::Result<()> {
    let spec = ScmSpec::new(
        vec![
            NodeDef::exogenous("U", Noise::gaussian(0.0, 1.0)),
            NodeDef::exogenous("Z", Noise::gaussian(0.0, 1.0)),
            NodeDef::new("D", &["Z", "U"], Noise::None, |p, _, _| p[0] + p[1]),
            NodeDef::new("Y", &["D", "U"], Noise::gaussian(0.0, 1.0), |p, u, _| {
                0.5 * p[0] + p[1] + u
            }),
        ],
        BTreeMap::new(),
    )?;
    let data = spec.sample(&Default::default(), 50_000, RngHandle::new(3, 0))?;
    let (z, d, y) = (data.column("Z")?, data.column("D")?, data.column("Y")?);

    let ols = ols_effect(d, y)?;
    let iv = iv_estimate(z, d, y)?;
    println!("true effect 0.5");
    println!("OLS: {:.3} (se {:.3})", ols.tau_hat, ols.std_error);
    println!(
        "IV:  {:.3} (se {:.3})  95% CI [{:.3}, {:.3}]",
        iv.tau_hat, iv.std_error, iv.ci_low, iv.ci_high
    );

    // An instrument unrelated to the treatment is refused.
    let noise: Vec<f64> = (0..d.len())
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let flat = vec![1.0; d.len()];
    match iv_estimate(&noise, &flat, y) {
        Err(e) => println!("constant treatment: {e}"),
        Ok(est) => println!("unexpected estimate {:.3}", est.tau_hat),
    }
    Ok(())
}
