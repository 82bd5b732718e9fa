//! Fit standard and length-deconfounded reward models once and probe them with
//! length-inflated responses.
//!
//! cargo run --example reward_model

use causalab::estimators::{hack_gain, reward_fit, RewardKind};
use causalab::scm::{demo4_spec, RngHandle};

fn main() -> causalab::Result<()> {
    let data = demo4_spec().sample(&Default::default(), 5000, RngHandle::new(2, 0))?;
    for kind in [RewardKind::Standard, RewardKind::Causal] {
        let m = reward_fit(&data, kind)?;
        println!(
            "{kind:?}: reward = {:.3} + {:.3} C_hat + {:.3} L; padding by 2 gains {:.3}",
            m.intercept,
            m.content_weight,
            m.length_weight,
            hack_gain(&m, 2.0)
        );
    }
    Ok(())
}
