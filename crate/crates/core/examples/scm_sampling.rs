//! Declare a small structural causal model, sample it in two environments and
//! write the draws as CSV.
//!
//! cargo run --example scm_sampling > draws.csv

use std::collections::BTreeMap;

use causalab::scm::{NodeDef, Noise, RngHandle, Role, ScmSpec};

fn main() -> causalab::Result<()> {
    // Temperature drives both ice-cream sales and drownings; `season` shifts
    // temperature between environments.
    let spec = ScmSpec::new(
        vec![
            NodeDef::new("temp", &[], Noise::gaussian(0.0, 1.0), |_, u, env| {
                env["season"] + u
            })
            .with_env_params(&["season"])
            .with_role(Role::Covariate),
            NodeDef::new(
                "ice_cream",
                &["temp"],
                Noise::gaussian(0.0, 0.5),
                |p, u, _| 2.0 * p[0] + u,
            )
            .with_role(Role::Treatment),
            NodeDef::new(
                "drownings",
                &["temp"],
                Noise::gaussian(0.0, 0.5),
                |p, u, _| 0.8 * p[0] + u,
            )
            .with_role(Role::Outcome),
        ],
        BTreeMap::from([("season".to_string(), Some(0.0))]),
    )?;

    let rng = RngHandle::new(7, 0);
    let winter = spec.sample(
        &BTreeMap::from([("season".into(), -1.0)]),
        5,
        rng.derive("winter"),
    )?;
    let summer = spec.sample(
        &BTreeMap::from([("season".into(), 1.5)]),
        5,
        rng.derive("summer"),
    )?;
    eprintln!("roles: {:?}", winter.roles());
    causalab::Dataset::concat(&[winter, summer])?.write_csv(std::io::stdout())
}
