use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::LinearFit;
use crate::scm::Dataset;

pub const DEFAULT_INVARIANCE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Invariant,
    Sensitive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceReport {
    pub feature: String,
    pub intervention_values: Vec<f64>,
    pub max_abs_prediction_change: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Sets `feature` to each of `values` on every row and measures the largest
/// change in the model's prediction.
pub fn invariance_test(
    fit: &LinearFit,
    data: &Dataset,
    feature: &str,
    values: &[f64],
    threshold: f64,
) -> Result<InvarianceReport> {
    data.column(feature)?;
    if values.is_empty() {
        return Err(Error::config("no intervention values given"));
    }
    if values.iter().any(|v| !v.is_finite()) || !(threshold >= 0.0) {
        return Err(Error::config(
            "intervention values and threshold must be finite, threshold >= 0",
        ));
    }
    let x = data.matrix(&fit.features)?;
    let slot = fit.features.iter().position(|f| f == feature);
    let mut max_change: f64 = 0.0;
    if let Some(slot) = slot {
        let mut row = vec![0.0; fit.features.len()];
        for i in 0..data.n() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = x[(i, j)];
            }
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &value in values {
                row[slot] = value;
                let p = fit.predict_row(&row);
                lo = lo.min(p);
                hi = hi.max(p);
            }
            max_change = max_change.max(hi - lo);
        }
    }
    let verdict = if max_change <= threshold {
        Verdict::Invariant
    } else {
        Verdict::Sensitive
    };
    Ok(InvarianceReport {
        feature: feature.to_string(),
        intervention_values: values.to_vec(),
        max_abs_prediction_change: max_change,
        threshold,
        verdict,
    })
}
