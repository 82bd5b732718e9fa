//! Monte Carlo harness and the four demonstration drivers.

mod demo1;
mod demo2;
mod demo3;
mod demo4;
mod mc;
mod report;

pub use demo1::{run_demo1, DEMO1_GRID};
pub use demo2::{run_demo2, run_demo2_with, DEMO2_GRID, DEMO2_SAMPLE_SIZE};
pub use demo3::{run_demo3, DEMO3_GRID};
pub use demo4::{
    run_demo4, run_demo4_with, DEMO4_GAIN_REPLICATIONS, DEMO4_GRID, DEMO4_SAMPLE_SIZE,
};
pub use mc::{monte_carlo, replicate, Draw, McPlan, ReplicationStats};
pub use report::{read_long_csv, write_long_csv, DemoReport, LongRow, ReportEntry, ReportMetadata};

use crate::error::{Error, Result};

/// Default replication count per demonstration.
pub fn default_replications(demo_id: u8) -> Option<u64> {
    match demo_id {
        1 => Some(60),
        2 => Some(30),
        3 => Some(200),
        4 => Some(100),
        _ => None,
    }
}

/// The default plan (replications and grid) for a demonstration.
pub fn default_plan(demo_id: u8, base_seed: u64) -> Result<McPlan> {
    let grid = match demo_id {
        1 => DEMO1_GRID.to_vec(),
        2 => DEMO2_GRID.to_vec(),
        3 => DEMO3_GRID.to_vec(),
        4 => DEMO4_GRID.to_vec(),
        other => return Err(Error::config(format!("unknown demo {other}; expected 1-4"))),
    };
    Ok(McPlan {
        replications: default_replications(demo_id).expect("known demo"),
        base_seed,
        grid,
    })
}

/// Runs demonstration `demo_id` under `plan`.
pub fn run_demo(demo_id: u8, plan: &McPlan) -> Result<DemoReport> {
    match demo_id {
        1 => run_demo1(plan),
        2 => run_demo2(plan),
        3 => run_demo3(plan),
        4 => run_demo4(plan),
        other => Err(Error::config(format!("unknown demo {other}; expected 1-4"))),
    }
}
