use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 97.5% standard normal quantile.
pub const Z_975: f64 = 1.959964;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Erm,
    Backdoor,
    Iv,
    Dml,
}

/// Point estimate of a treatment effect with a normal-theory 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausalEstimate {
    pub tau_hat: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: Method,
    pub n_used: usize,
}

impl CausalEstimate {
    pub fn new(tau_hat: f64, std_error: f64, method: Method, n_used: usize) -> Result<Self> {
        if !tau_hat.is_finite() {
            return Err(Error::Numeric(format!("{method:?} estimate is not finite")));
        }
        if !(std_error >= 0.0 && std_error.is_finite()) {
            return Err(Error::Numeric(format!(
                "{method:?} standard error {std_error} is not a finite non-negative number"
            )));
        }
        let half = Z_975 * std_error;
        Ok(Self {
            tau_hat,
            std_error,
            ci_low: tau_hat - half,
            ci_high: tau_hat + half,
            method,
            n_used,
        })
    }

    pub fn covers(&self, truth: f64) -> bool {
        self.ci_low <= truth && truth <= self.ci_high
    }
}
