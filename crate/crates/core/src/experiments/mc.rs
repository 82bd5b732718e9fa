use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scm::RngHandle;

/// Replication count, base seed and scenario grid of a Monte Carlo study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McPlan {
    pub replications: u64,
    pub base_seed: u64,
    pub grid: Vec<f64>,
}

impl McPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::config("replications must be at least 1"));
        }
        if self.grid.is_empty() {
            return Err(Error::config("scenario grid is empty"));
        }
        if self.grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::config("scenario grid values must be finite"));
        }
        Ok(())
    }

    /// Handle for replication `rep` at grid point `point`. Keyed by the
    /// point's value, so extending the grid leaves existing points unchanged.
    pub fn handle(&self, point: f64, rep: u64) -> RngHandle {
        RngHandle::new(self.base_seed, rep).derive_u64(point.to_bits())
    }
}

/// One replication's scalar result, optionally with a confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub value: f64,
    pub ci: Option<(f64, f64)>,
}

impl Draw {
    pub fn value(value: f64) -> Self {
        Self { value, ci: None }
    }

    pub fn with_ci(value: f64, low: f64, high: f64) -> Self {
        Self {
            value,
            ci: Some((low, high)),
        }
    }
}

/// Aggregate of one metric over replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplicationStats {
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for a single replication.
    pub std_dev: f64,
    pub bias: Option<f64>,
    pub rmse: Option<f64>,
    /// Share of replications whose interval contains the truth.
    pub coverage: Option<f64>,
    pub n_reps: usize,
}

impl ReplicationStats {
    pub fn from_values(values: &[f64], truth: Option<f64>) -> Self {
        let draws: Vec<Draw> = values.iter().map(|&v| Draw::value(v)).collect();
        Self::from_draws(&draws, truth)
    }

    /// Aggregates in slice order, so results do not depend on scheduling.
    pub fn from_draws(draws: &[Draw], truth: Option<f64>) -> Self {
        let n = draws.len();
        let nf = n as f64;
        let mean = draws.iter().map(|d| d.value).sum::<f64>() / nf;
        let std_dev = if n > 1 {
            (draws.iter().map(|d| (d.value - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
        } else {
            0.0
        };
        let bias = truth.map(|t| mean - t);
        let rmse =
            truth.map(|t| (draws.iter().map(|d| (d.value - t).powi(2)).sum::<f64>() / nf).sqrt());
        let coverage = match truth {
            Some(t) if draws.iter().all(|d| d.ci.is_some()) => Some(
                draws
                    .iter()
                    .filter(|d| {
                        let (lo, hi) = d.ci.expect("checked");
                        lo <= t && t <= hi
                    })
                    .count() as f64
                    / nf,
            ),
            _ => None,
        };
        Self {
            mean,
            std_dev,
            bias,
            rmse,
            coverage,
            n_reps: n,
        }
    }
}

/// Runs `runner` once per replication (stream id = replication index), in
/// parallel, returning results in replication order. The first failure (by
/// index) aborts the study.
pub fn replicate<T, F>(
    replications: u64,
    handle: impl Fn(u64) -> RngHandle + Sync,
    runner: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RngHandle) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..replications)
        .into_par_iter()
        .map(|rep| runner(handle(rep)))
        .collect();
    results
        .into_iter()
        .enumerate()
        .map(|(rep, r)| {
            r.map_err(|e| Error::Replication {
                index: rep as u64,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Runs a scalar scenario `plan.replications` times and aggregates it.
pub fn monte_carlo<F>(runner: F, plan: &McPlan, truth: Option<f64>) -> Result<ReplicationStats>
where
    F: Fn(RngHandle) -> Result<Draw> + Sync,
{
    if plan.replications < 1 {
        return Err(Error::config("replications must be at least 1"));
    }
    let seed = plan.base_seed;
    let draws = replicate(plan.replications, |rep| RngHandle::new(seed, rep), runner)?;
    Ok(ReplicationStats::from_draws(&draws, truth))
}
