use crate::error::Result;
use crate::estimators::{hack_gain, reward_fit, RewardKind, RewardModel};
use crate::scm::{demo4_spec, Env};

use super::{replicate, DemoReport, McPlan, ReplicationStats, ReportMetadata};

/// Length-inflation amounts ΔL at which the reward gain is evaluated.
pub const DEMO4_GRID: [f64; 7] = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
pub const DEMO4_SAMPLE_SIZE: usize = 5000;
/// Replications used for the gain bands (the weights use all replications).
pub const DEMO4_GAIN_REPLICATIONS: u64 = 60;

pub fn run_demo4(plan: &McPlan) -> Result<DemoReport> {
    run_demo4_with(plan, DEMO4_SAMPLE_SIZE)
}

/// Reward-hacking study: fit standard and causal reward models per
/// replication, report their length weights (all replications, scenario
/// `weights`) and the gain from pure length inflation at each ΔL in the grid
/// (first 60 replications, scenarios `dl<ΔL>`).
pub fn run_demo4_with(plan: &McPlan, n: usize) -> Result<DemoReport> {
    plan.validate()?;
    let spec = demo4_spec();
    let gain_reps = plan.replications.min(DEMO4_GAIN_REPLICATIONS) as usize;
    let mut report = DemoReport::new(
        4,
        ReportMetadata {
            base_seed: plan.base_seed,
            replications: plan.replications,
            grid: plan.grid.clone(),
            settings: [
                ("n".to_string(), n.to_string()),
                ("gain_replications".to_string(), gain_reps.to_string()),
            ]
            .into(),
        },
    );
    let fits: Vec<[RewardModel; 2]> = replicate(
        plan.replications,
        |rep| plan.handle(0.0, rep),
        |h| {
            let data = spec.sample(&Env::new(), n, h.derive("data"))?;
            Ok([
                reward_fit(&data, RewardKind::Standard)?,
                reward_fit(&data, RewardKind::Causal)?,
            ])
        },
    )?;
    let methods = ["standard_reward", "causal_reward"];
    for (m, method) in methods.iter().enumerate() {
        let lw: Vec<f64> = fits.iter().map(|f| f[m].length_weight).collect();
        let cw: Vec<f64> = fits.iter().map(|f| f[m].content_weight).collect();
        report.push(
            "weights",
            method,
            "length_weight",
            ReplicationStats::from_values(&lw, Some(0.0)),
        );
        report.push(
            "weights",
            method,
            "content_weight",
            ReplicationStats::from_values(&cw, None),
        );
    }
    for &dl in &plan.grid {
        let scenario = format!("dl{dl}");
        for (m, method) in methods.iter().enumerate() {
            let gains: Vec<f64> = fits[..gain_reps]
                .iter()
                .map(|f| hack_gain(&f[m], dl))
                .collect();
            report.push(
                &scenario,
                method,
                "gain",
                ReplicationStats::from_values(&gains, None),
            );
        }
    }
    Ok(report)
}
