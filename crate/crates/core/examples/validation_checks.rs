//! Conditional-independence and invariance checks for a fitted model.
//!
//! cargo run --example validation_checks

use causalab::estimators::erm_predictor;
use causalab::scm::{demo1_env, demo1_spec, RngHandle};
use causalab::validate::{fisher_z_test, invariance_test, DEFAULT_INVARIANCE_THRESHOLD};

fn main() -> causalab::Result<()> {
    let data = demo1_spec().sample(&demo1_env(1.0), 5000, RngHandle::new(9, 0))?;

    // X_spur depends on Y only through Z.
    for cond in [vec![], vec!["Z"], vec!["Z", "X_causal"]] {
        let t = fisher_z_test(&data, "X_spur", "Y", &cond)?;
        println!(
            "X_spur vs Y | {cond:?}: r = {:.3}, p = {:.3}",
            t.partial_correlation, t.p_value
        );
    }

    for features in [["X_causal", "X_spur"], ["X_causal", "Z"]] {
        let fit = erm_predictor(&data, &features)?;
        let report = invariance_test(
            &fit,
            &data,
            "X_spur",
            &[-2.0, 0.0, 2.0],
            DEFAULT_INVARIANCE_THRESHOLD,
        )?;
        println!(
            "model on {features:?}: intervening on X_spur moves predictions by {:.3} -> {:?}",
            report.max_abs_prediction_change, report.verdict
        );
    }
    Ok(())
}
