//! Train on one environment, test on the flipped one, and compare how much
//! the ERM and backdoor-adjusted predictors degrade.
//!
//! cargo run --release --example demo1_environment_shift [reps]

use causalab::experiments::{default_plan, run_demo1};

fn main() -> causalab::Result<()> {
    let mut plan = default_plan(1, 42)?;
    if let Some(reps) = std::env::args().nth(1) {
        plan.replications = reps.parse().expect("reps must be an integer");
    }
    let report = run_demo1(&plan)?;
    println!(
        "{:>8} {:>8} {:>10} {:>10} {:>8}",
        "n", "method", "train_mse", "test_mse", "ratio"
    );
    for scenario in report.scenarios() {
        for method in ["erm", "causal"] {
            let get = |m| {
                report
                    .get(scenario, method, m)
                    .map(|s| s.mean)
                    .unwrap_or(f64::NAN)
            };
            println!(
                "{:>8} {:>8} {:>10.4} {:>10.4} {:>8.2}",
                scenario,
                method,
                get("train_mse"),
                get("test_mse"),
                get("ratio")
            );
        }
    }
    Ok(())
}
