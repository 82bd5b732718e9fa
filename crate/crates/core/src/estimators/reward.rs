use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ols_fit;
use crate::scm::Dataset;

use super::{cross_fit_residuals, mean};

pub const CONTENT_COLUMN: &str = "C_hat";
pub const LENGTH_COLUMN: &str = "L";
pub const PREFERENCE_COLUMN: &str = "Y";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardKind {
    Standard,
    Causal,
}

/// Linear reward `intercept + content_weight·Ĉ + length_weight·L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardModel {
    pub content_weight: f64,
    /// Always exactly 0 for [`RewardKind::Causal`].
    pub length_weight: f64,
    pub intercept: f64,
    pub kind: RewardKind,
}

impl RewardModel {
    pub fn reward(&self, content: f64, length: f64) -> f64 {
        self.intercept + self.content_weight * content + self.length_weight * length
    }
}

/// Fits a reward model on the `C_hat`, `L`, `Y` columns.
///
/// `Standard` regresses `Y` on `(C_hat, L)`. `Causal` partials `L` out of both
/// `C_hat` and `Y` with two-fold cross-fitted linear regressions and regresses
/// residual on residual; length gets no weight at all.
pub fn reward_fit(data: &Dataset, kind: RewardKind) -> Result<RewardModel> {
    let content = data.column(CONTENT_COLUMN)?;
    let length = data.column(LENGTH_COLUMN)?;
    let y = data.column(PREFERENCE_COLUMN)?;
    match kind {
        RewardKind::Standard => {
            let fit = ols_fit(&data.matrix(&[CONTENT_COLUMN, LENGTH_COLUMN])?, y)?;
            Ok(RewardModel {
                content_weight: fit.coefficients[0],
                length_weight: fit.coefficients[1],
                intercept: fit.intercept,
                kind,
            })
        }
        RewardKind::Causal => {
            let n = data.n();
            if n < 8 {
                return Err(Error::config("causal reward fit needs at least 8 rows"));
            }
            let folds: Vec<Vec<usize>> = (0..2).map(|k| (k..n).step_by(2).collect()).collect();
            let res = cross_fit_residuals(length, &[content, y], &folds, 1, 0.0, false)?;
            let (rc, ry) = (&res[0], &res[1]);
            let scc: f64 = rc.iter().map(|v| v * v).sum();
            if scc <= 0.0 {
                return Err(Error::Degenerate(
                    "content proxy is a function of length".into(),
                ));
            }
            let slope = rc.iter().zip(ry).map(|(a, b)| a * b).sum::<f64>() / scc;
            Ok(RewardModel {
                content_weight: slope,
                length_weight: 0.0,
                intercept: mean(y) - slope * mean(content),
                kind,
            })
        }
    }
}

/// Reward change from inflating length by `delta_l` with content fixed.
pub fn hack_gain(model: &RewardModel, delta_l: f64) -> f64 {
    model.length_weight * delta_l
}
