//! One cross-fitted DML estimate with non-default settings.
//!
//! cargo run --example double_ml [n]

use causalab::estimators::{dml_estimate, ols_effect, DmlConfig};
use causalab::scm::{demo3_spec, RngHandle};

fn main() -> causalab::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(2000, |s| s.parse().expect("n must be an integer"));
    let data = demo3_spec().sample(&Default::default(), n, RngHandle::new(11, 0))?;
    let naive = ols_effect(data.column("D")?, data.column("Y")?)?;
    println!("naive OLS: {:.3}", naive.tau_hat);
    for (degree, folds) in [(1, 2), (3, 5), (5, 5), (7, 10)] {
        let cfg = DmlConfig {
            poly_degree: degree,
            n_folds: folds,
            ..DmlConfig::default()
        };
        let est = dml_estimate(&data, &cfg, RngHandle::new(11, 1))?;
        println!(
            "degree {degree}, {folds:>2} folds: {:.3}  95% CI [{:.3}, {:.3}]",
            est.tau_hat, est.ci_low, est.ci_high
        );
    }
    Ok(())
}
