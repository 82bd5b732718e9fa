use crate::error::Result;
use crate::estimators::{dml_estimate, ols_effect, CausalEstimate, DmlConfig};
use crate::scm::demos::DEMO3_TAU;
use crate::scm::{demo3_spec, Env};

use super::{replicate, DemoReport, Draw, McPlan, ReplicationStats, ReportMetadata};

pub const DEMO3_GRID: [f64; 5] = [100.0, 200.0, 400.0, 800.0, 1600.0];

fn draw(e: &CausalEstimate) -> Draw {
    Draw::with_ci(e.tau_hat, e.ci_low, e.ci_high)
}

/// Naive OLS versus cross-fitted DML in the partially linear model, over
/// sample sizes. Both are scored against τ = 0.5.
pub fn run_demo3(plan: &McPlan) -> Result<DemoReport> {
    plan.validate()?;
    let spec = demo3_spec();
    let cfg = DmlConfig::default();
    let mut report = DemoReport::new(
        3,
        ReportMetadata {
            base_seed: plan.base_seed,
            replications: plan.replications,
            grid: plan.grid.clone(),
            settings: [
                ("truth".to_string(), DEMO3_TAU.to_string()),
                ("dml_poly_degree".to_string(), cfg.poly_degree.to_string()),
                ("dml_folds".to_string(), cfg.n_folds.to_string()),
            ]
            .into(),
        },
    );
    for &point in &plan.grid {
        let n = point as usize;
        let reps = replicate(
            plan.replications,
            |rep| plan.handle(point, rep),
            |h| {
                let data = spec.sample(&Env::new(), n, h.derive("data"))?;
                let ols = ols_effect(data.column("D")?, data.column("Y")?)?;
                let dml = dml_estimate(&data, &cfg, h.derive("dml"))?;
                Ok([draw(&ols), draw(&dml)])
            },
        )?;
        let scenario = format!("n{n}");
        for (m, method) in ["ols", "dml"].iter().enumerate() {
            let draws: Vec<Draw> = reps.iter().map(|r| r[m]).collect();
            report.push(
                &scenario,
                method,
                "tau_hat",
                ReplicationStats::from_draws(&draws, Some(DEMO3_TAU)),
            );
        }
    }
    Ok(report)
}
