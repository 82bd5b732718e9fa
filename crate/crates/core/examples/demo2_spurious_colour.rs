//! Logistic classifiers trained where colour agrees with the label with
//! probability p, evaluated where the agreement is reversed.
//!
//! cargo run --release --example demo2_spurious_colour [reps]

use causalab::experiments::{default_plan, run_demo2};

fn main() -> causalab::Result<()> {
    let mut plan = default_plan(2, 42)?;
    if let Some(reps) = std::env::args().nth(1) {
        plan.replications = reps.parse().expect("reps must be an integer");
    }
    let report = run_demo2(&plan)?;
    println!(
        "{:>6} {:>7} {:>9} {:>8} {:>7}",
        "p", "method", "train_acc", "ood_acc", "gap"
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
                "{:>6} {:>7} {:>9.3} {:>8.3} {:>7.3}",
                scenario,
                method,
                get("train_acc"),
                get("ood_acc"),
                get("gap")
            );
        }
    }
    Ok(())
}
