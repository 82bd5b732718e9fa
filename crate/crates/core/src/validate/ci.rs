use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::numerics::ols_fit;
use crate::scm::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiTestResult {
    /// Fisher z statistic `sqrt(n − |cond| − 3) · atanh(ρ̂)`.
    pub statistic: f64,
    pub p_value: f64,
    pub partial_correlation: f64,
    pub n: usize,
    pub conditioning_size: usize,
}

fn correlation(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (saa > 0.0 && sbb > 0.0).then(|| (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Tests `x ⟂ y | cond` with the partial-correlation Fisher z test.
///
/// The partial correlation is the correlation of the residuals of `x` and `y`
/// after least-squares regression on `cond`.
pub fn fisher_z_test(
    data: &Dataset,
    x: &str,
    y: &str,
    cond: &[impl AsRef<str>],
) -> Result<CiTestResult> {
    let n = data.n();
    let k = cond.len();
    if n <= k + 3 {
        return Err(Error::config(format!(
            "Fisher z test with {k} conditioning variables needs more than {} rows, got {n}",
            k + 3
        )));
    }
    if x == y || cond.iter().any(|c| c.as_ref() == x || c.as_ref() == y) {
        return Err(Error::config(format!(
            "`{x}` and `{y}` must be distinct and absent from the conditioning set"
        )));
    }
    let xs = data.column(x)?;
    let ys = data.column(y)?;
    let (rx, ry) = if cond.is_empty() {
        (xs.to_vec(), ys.to_vec())
    } else {
        let z = data.matrix(cond)?;
        (ols_fit(&z, xs)?.residuals, ols_fit(&z, ys)?.residuals)
    };
    let rho = correlation(&rx, &ry).ok_or_else(|| {
        Error::Degenerate(format!(
            "`{x}` or `{y}` has no variation left after conditioning"
        ))
    })?;
    if rho.abs() >= 1.0 - 1e-12 {
        return Err(Error::Degenerate(format!(
            "`{x}` and `{y}` are deterministically related (|ρ| = 1)"
        )));
    }
    let statistic = ((n - k - 3) as f64).sqrt() * rho.atanh();
    let p_value = erfc(statistic.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0);
    Ok(CiTestResult {
        statistic,
        p_value,
        partial_correlation: rho,
        n,
        conditioning_size: k,
    })
}
