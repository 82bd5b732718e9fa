//! Naive OLS against cross-fitted double machine learning in a partially
//! linear model with a nonlinear confounder.
//!
//! cargo run --release --example demo3_double_ml [reps]

use causalab::experiments::{default_plan, run_demo3};

fn main() -> causalab::Result<()> {
    let mut plan = default_plan(3, 42)?;
    if let Some(reps) = std::env::args().nth(1) {
        plan.replications = reps.parse().expect("reps must be an integer");
    }
    let report = run_demo3(&plan)?;
    println!(
        "{:>6} {:>6} {:>8} {:>8} {:>8} {:>9}",
        "n", "method", "mean", "bias", "rmse", "coverage"
    );
    for scenario in report.scenarios() {
        for method in ["ols", "dml"] {
            let s = report.get(scenario, method, "tau_hat").expect("entry");
            println!(
                "{:>6} {:>6} {:>8.4} {:>8.4} {:>8.4} {:>9.3}",
                scenario,
                method,
                s.mean,
                s.bias.unwrap_or(f64::NAN),
                s.rmse.unwrap_or(f64::NAN),
                s.coverage.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
