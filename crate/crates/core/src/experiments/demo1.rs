use crate::error::Result;
use crate::estimators::erm_predictor;
use crate::numerics::predict;
use crate::scm::{demo1_env, demo1_spec, Dataset};

use super::{replicate, DemoReport, McPlan, ReplicationStats, ReportMetadata};

pub const DEMO1_GRID: [f64; 5] = [200.0, 500.0, 1000.0, 2000.0, 5000.0];

const ERM_FEATURES: [&str; 2] = ["X_causal", "X_spur"];
const CAUSAL_FEATURES: [&str; 2] = ["X_causal", "Z"];

struct Rep {
    // [train_mse, test_mse, ratio] for erm then causal
    values: [[f64; 3]; 2],
}

fn mse(pred: &[f64], y: &[f64]) -> f64 {
    pred.iter()
        .zip(y)
        .map(|(p, y)| (p - y).powi(2))
        .sum::<f64>()
        / y.len() as f64
}

fn train_test(features: &[&str], train: &Dataset, test: &Dataset) -> Result<[f64; 3]> {
    let fit = erm_predictor(train, features)?;
    let train_mse = fit.residuals.iter().map(|r| r * r).sum::<f64>() / train.n() as f64;
    let test_pred = predict(&fit, &test.matrix(features)?)?;
    let test_mse = mse(&test_pred, test.column("Y")?);
    Ok([train_mse, test_mse, test_mse / train_mse])
}

/// Environment-shift study: train with `s_e = +1`, test with `s_e = −1`, for
/// the ERM predictor on `(X_causal, X_spur)` and the backdoor-adjusted
/// predictor on `(X_causal, Z)`. The grid holds training sizes.
pub fn run_demo1(plan: &McPlan) -> Result<DemoReport> {
    plan.validate()?;
    let spec = demo1_spec();
    let mut report = DemoReport::new(
        1,
        ReportMetadata {
            base_seed: plan.base_seed,
            replications: plan.replications,
            grid: plan.grid.clone(),
            settings: [("test_size".to_string(), "same as training size".to_string())].into(),
        },
    );
    for &point in &plan.grid {
        let n = point as usize;
        let reps = replicate(
            plan.replications,
            |rep| plan.handle(point, rep),
            |h| {
                let train = spec.sample(&demo1_env(1.0), n, h.derive("train"))?;
                let test = spec.sample(&demo1_env(-1.0), n, h.derive("test"))?;
                Ok(Rep {
                    values: [
                        train_test(&ERM_FEATURES, &train, &test)?,
                        train_test(&CAUSAL_FEATURES, &train, &test)?,
                    ],
                })
            },
        )?;
        let scenario = format!("n{n}");
        for (m, method) in ["erm", "causal"].iter().enumerate() {
            for (k, metric) in ["train_mse", "test_mse", "ratio"].iter().enumerate() {
                let values: Vec<f64> = reps.iter().map(|r| r.values[m][k]).collect();
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
