use crate::error::Result;
use crate::estimators::erm_predictor;
use crate::numerics::predict;
use crate::scm::{demo2_env, demo2_spec, Dataset};

use super::{replicate, DemoReport, McPlan, ReplicationStats, ReportMetadata};

pub const DEMO2_GRID: [f64; 7] = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98];

/// Train and test size per replication.
pub const DEMO2_SAMPLE_SIZE: usize = 5000;

fn accuracy(features: &[&str], data: &Dataset, fit: &crate::numerics::LinearFit) -> Result<f64> {
    let p = predict(fit, &data.matrix(features)?)?;
    let y = data.column("Y")?;
    let hits = p
        .iter()
        .zip(y)
        .filter(|(p, y)| (**p >= 0.5) == (**y == 1.0))
        .count();
    Ok(hits as f64 / y.len() as f64)
}

pub fn run_demo2(plan: &McPlan) -> Result<DemoReport> {
    run_demo2_with(plan, DEMO2_SAMPLE_SIZE, DEMO2_SAMPLE_SIZE)
}

/// Spurious-colour study over the colour-agreement grid `p`: train at `p`,
/// evaluate out of distribution at `1 − p`. ERM is a logistic fit on shape and
/// colour; the causal predictor uses shape only.
pub fn run_demo2_with(plan: &McPlan, n_train: usize, n_test: usize) -> Result<DemoReport> {
    plan.validate()?;
    let spec = demo2_spec();
    let mut report = DemoReport::new(
        2,
        ReportMetadata {
            base_seed: plan.base_seed,
            replications: plan.replications,
            grid: plan.grid.clone(),
            settings: [
                ("n_train".to_string(), n_train.to_string()),
                ("n_test".to_string(), n_test.to_string()),
            ]
            .into(),
        },
    );
    let methods: [(&str, &[&str]); 2] = [("erm", &["shape", "colour"]), ("causal", &["shape"])];
    for &p in &plan.grid {
        let reps = replicate(
            plan.replications,
            |rep| plan.handle(p, rep),
            |h| {
                let train = spec.sample(&demo2_env(p), n_train, h.derive("train"))?;
                let test = spec.sample(&demo2_env(1.0 - p), n_test, h.derive("test"))?;
                let mut out = [[0.0; 3]; 2];
                for (slot, (_, features)) in out.iter_mut().zip(methods) {
                    let fit = erm_predictor(&train, features)?;
                    let train_acc = accuracy(features, &train, &fit)?;
                    let ood_acc = accuracy(features, &test, &fit)?;
                    *slot = [train_acc, ood_acc, train_acc - ood_acc];
                }
                Ok(out)
            },
        )?;
        let scenario = format!("p{p}");
        for (m, (method, _)) in methods.iter().enumerate() {
            for (k, metric) in ["train_acc", "ood_acc", "gap"].iter().enumerate() {
                let values: Vec<f64> = reps.iter().map(|r| r[m][k]).collect();
                report.push(
                    &scenario,
                    method,
                    metric,
                    ReplicationStats::from_values(&values, None),
                );
            }
        }
    }
    Ok(report)
}
