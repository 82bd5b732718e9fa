use crate::error::{Error, Result};

use super::{mean, CausalEstimate, Method};

/// Minimum `|Ĉov(Z, D)|` accepted by [`iv_estimate`].
pub const WEAK_INSTRUMENT_FLOOR: f64 = 1e-6;

/// Wald/IV ratio `Ĉov(Z, Y) / Ĉov(Z, D)` with a heteroskedasticity-robust
/// standard error.
pub fn iv_estimate(z: &[f64], d: &[f64], y: &[f64]) -> Result<CausalEstimate> {
    iv_estimate_with_floor(z, d, y, WEAK_INSTRUMENT_FLOOR)
}

pub fn iv_estimate_with_floor(
    z: &[f64],
    d: &[f64],
    y: &[f64],
    floor: f64,
) -> Result<CausalEstimate> {
    let n = z.len();
    if d.len() != n || y.len() != n {
        return Err(Error::config(
            "instrument, treatment and outcome lengths differ",
        ));
    }
    if n < 3 {
        return Err(Error::config("IV needs at least 3 observations"));
    }
    let (zm, dm, ym) = (mean(z), mean(d), mean(y));
    let denom = (n - 1) as f64;
    let cov_zd = z
        .iter()
        .zip(d)
        .map(|(a, b)| (a - zm) * (b - dm))
        .sum::<f64>()
        / denom;
    let cov_zy = z
        .iter()
        .zip(y)
        .map(|(a, b)| (a - zm) * (b - ym))
        .sum::<f64>()
        / denom;
    if !(cov_zd.abs() > floor) {
        return Err(Error::WeakInstrument {
            covariance: cov_zd,
            floor,
        });
    }
    let tau = cov_zy / cov_zd;
    // Residuals from the fitted structural line y = a + τ d.
    let intercept = ym - tau * dm;
    let meat: f64 = (0..n)
        .map(|i| {
            let e = y[i] - intercept - tau * d[i];
            (z[i] - zm).powi(2) * e * e
        })
        .sum();
    let sxd = cov_zd * denom;
    CausalEstimate::new(tau, meat.sqrt() / sxd.abs(), Method::Iv, n)
}
