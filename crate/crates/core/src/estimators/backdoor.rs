use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scm::Dataset;

use super::{CausalEstimate, Method};

/// `E[Y | do(X = 1)]` and `E[Y | do(X = 0)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterventionalMeans {
    pub treated: f64,
    pub control: f64,
}

impl InterventionalMeans {
    pub fn ate(&self) -> f64 {
        self.treated - self.control
    }
}

/// Stratum label per row. Columns with at most `bins` distinct values keep
/// one stratum per value; others are cut into equal-frequency bins.
fn strata(values: &[f64], bins: usize) -> Vec<usize> {
    let distinct: BTreeSet<u64> = values.iter().map(|v| v.to_bits()).collect();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    if distinct.len() <= bins {
        let mut levels = sorted;
        levels.dedup();
        return values
            .iter()
            .map(|v| levels.partition_point(|l| l < v))
            .collect();
    }
    let n = sorted.len();
    let mut cuts: Vec<f64> = (1..bins).map(|k| sorted[k * n / bins]).collect();
    cuts.dedup();
    values
        .iter()
        .map(|v| cuts.partition_point(|c| c <= v))
        .collect()
}

struct Cell {
    count: usize,
    sum: f64,
    sum_sq: f64,
}

impl Cell {
    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let m = self.mean();
        ((self.sum_sq - self.count as f64 * m * m) / (self.count - 1) as f64).max(0.0)
    }
}

struct Stratified {
    weights: Vec<f64>,
    treated: Vec<Cell>,
    control: Vec<Cell>,
    n: usize,
}

fn stratify(
    data: &Dataset,
    treatment: &str,
    outcome: &str,
    adjustment: &str,
    bins: usize,
) -> Result<Stratified> {
    if bins < 1 {
        return Err(Error::config("bins must be at least 1"));
    }
    let x = data.column(treatment)?;
    let y = data.column(outcome)?;
    let z = data.column(adjustment)?;
    if x.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::config(format!(
            "treatment `{treatment}` must be binary 0/1"
        )));
    }
    if x.is_empty() {
        return Err(Error::config("empty dataset"));
    }
    let labels = strata(z, bins);
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let empty = || Cell {
        count: 0,
        sum: 0.0,
        sum_sq: 0.0,
    };
    let mut treated: Vec<Cell> = (0..k).map(|_| empty()).collect();
    let mut control: Vec<Cell> = (0..k).map(|_| empty()).collect();
    for ((&xi, &yi), &s) in x.iter().zip(y).zip(&labels) {
        let cell = if xi == 1.0 {
            &mut treated[s]
        } else {
            &mut control[s]
        };
        cell.count += 1;
        cell.sum += yi;
        cell.sum_sq += yi * yi;
    }
    let n = x.len();
    let mut weights = Vec::with_capacity(k);
    for s in 0..k {
        let total = treated[s].count + control[s].count;
        if total > 0 {
            for (cell, level) in [(&treated[s], 1), (&control[s], 0)] {
                if cell.count == 0 {
                    return Err(Error::Positivity(format!(
                        "no rows with {treatment} = {level} in stratum {s} of `{adjustment}`"
                    )));
                }
            }
        }
        weights.push(total as f64 / n as f64);
    }
    Ok(Stratified {
        weights,
        treated,
        control,
        n,
    })
}

/// Backdoor adjustment `Σ_z E[Y | X = x, Z = z] · P(Z = z)` for `x ∈ {1, 0}`.
pub fn backdoor_adjust(
    data: &Dataset,
    treatment: &str,
    outcome: &str,
    adjustment: &str,
    bins: usize,
) -> Result<InterventionalMeans> {
    let s = stratify(data, treatment, outcome, adjustment, bins)?;
    let combine = |cells: &[Cell]| {
        s.weights
            .iter()
            .zip(cells)
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, c)| w * c.mean())
            .sum::<f64>()
    };
    Ok(InterventionalMeans {
        treated: combine(&s.treated),
        control: combine(&s.control),
    })
}

/// Backdoor-adjusted ATE with the stratified-difference standard error
/// `sqrt(Σ_z w_z² (s²₁z/n₁z + s²₀z/n₀z))`, treating stratum weights as fixed.
pub fn backdoor_ate(
    data: &Dataset,
    treatment: &str,
    outcome: &str,
    adjustment: &str,
    bins: usize,
) -> Result<CausalEstimate> {
    let means = backdoor_adjust(data, treatment, outcome, adjustment, bins)?;
    let s = stratify(data, treatment, outcome, adjustment, bins)?;
    let var: f64 = s
        .weights
        .iter()
        .zip(s.treated.iter().zip(&s.control))
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, (t, c))| w * w * (t.variance() / t.count as f64 + c.variance() / c.count as f64))
        .sum();
    CausalEstimate::new(means.ate(), var.sqrt(), Method::Backdoor, s.n)
}
