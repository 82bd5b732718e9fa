//! A reward model that picks up response length through a proxy, against one
//! that partials the length out before fitting content.
//!
//! cargo run --release --example demo4_reward_hacking [reps]

use causalab::experiments::{default_plan, run_demo4};

fn main() -> causalab::Result<()> {
    let mut plan = default_plan(4, 42)?;
    if let Some(reps) = std::env::args().nth(1) {
        plan.replications = reps.parse().expect("reps must be an integer");
    }
    let report = run_demo4(&plan)?;
    for method in ["standard_reward", "causal_reward"] {
        let lw = report
            .get("weights", method, "length_weight")
            .expect("entry");
        let cw = report
            .get("weights", method, "content_weight")
            .expect("entry");
        println!(
            "{method:>16}: w_L = {:.4} (sd {:.4}), w_C = {:.4}",
            lw.mean, lw.std_dev, cw.mean
        );
    }
    println!("{:>6} {:>10} {:>10}", "dL", "standard", "causal");
    for &dl in &plan.grid {
        let scenario = format!("dl{dl}");
        let gain = |m| {
            report
                .get(&scenario, m, "gain")
                .map(|s| s.mean)
                .unwrap_or(f64::NAN)
        };
        println!(
            "{dl:>6.1} {:>10.4} {:>10.4}",
            gain("standard_reward"),
            gain("causal_reward")
        );
    }
    Ok(())
}
