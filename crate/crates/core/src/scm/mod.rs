//! Structural causal models and their sampler.

mod dataset;
pub mod demos;
mod model;
mod rng;

pub use dataset::{Dataset, Role};
pub use demos::{
    demo1_env, demo1_spec, demo2_env, demo2_spec, demo3_spec, demo3_spec_with, demo4_spec,
    population_moments_demo1, MomentTable,
};
pub use model::{sample, Env, Mechanism, NodeDef, Noise, ScmSpec};
pub use rng::RngHandle;
