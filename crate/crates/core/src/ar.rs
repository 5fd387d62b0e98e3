//! AR(p) models on univariate portfolio series.
//!
//! Fits are intercept-free on the mean-centered series; the mean is added back
//! when forecasting. No stationarity restriction is imposed on the
//! coefficients, so explosive fits are possible and show up as non-finite or
//! very wide forecast paths downstream.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::stats;

/// Smallest accepted series length beyond the lag order.
pub const MIN_EXTRA_OBS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    /// `beta[j]` multiplies the lag-`j+1` value.
    pub beta: Vec<f64>,
    pub series_mean: f64,
    pub residual_variance: f64,
    /// In-sample residuals, one per regression row (`n - p`).
    pub residuals: Vec<f64>,
}

impl ArModel {
    pub fn order(&self) -> usize {
        self.beta.len()
    }

    /// MA(∞) weights `ψ₀..ψ_{n-1}` with `ψ₀ = 1` and
    /// `ψ_j = Σ_{i=1..min(j,p)} β_i ψ_{j-i}`.
    pub fn psi_weights(&self, n: usize) -> Vec<f64> {
        let mut psi = Vec::with_capacity(n);
        for j in 0..n {
            if j == 0 {
                psi.push(1.0);
                continue;
            }
            let v = (1..=j.min(self.order()))
                .map(|i| self.beta[i - 1] * psi[j - i])
                .sum();
            psi.push(v);
        }
        psi
    }

    /// Residual sum of squares of the fit.
    pub fn rss(&self) -> f64 {
        self.residuals.iter().map(|r| r * r).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastPath {
    /// `ŷ_{t+1..t+d}`
    pub point: Vec<f64>,
    /// Forecast-error standard deviation at each step.
    pub err_std: Vec<f64>,
}

impl ForecastPath {
    pub fn horizon(&self) -> usize {
        self.point.len()
    }

    pub fn is_finite(&self) -> bool {
        self.point.iter().chain(&self.err_std).all(|v| v.is_finite())
    }
}

/// Fits AR(`order`) by OLS on the series centered at its sample mean.
pub fn fit_ar(series: &[f64], order: usize) -> Result<ArModel> {
    check_sample(series, order)?;
    fit_ar_about(series, order, stats::mean(series))
}

/// Fits AR(`order`) on `series - center`. Used where the centering constant is
/// dictated by a larger objective rather than by the series itself.
pub fn fit_ar_about(series: &[f64], order: usize, center: f64) -> Result<ArModel> {
    check_sample(series, order)?;
    let n = series.len();
    let rows = n - order;
    let c: Vec<f64> = series.iter().map(|y| y - center).collect();
    let design = DMatrix::from_fn(rows, order, |r, j| c[order + r - (j + 1)]);
    let response = DVector::from_fn(rows, |r, _| c[order + r]);
    let fit = stats::ols(&design, &response)?;
    Ok(ArModel {
        beta: fit.coefficients.iter().copied().collect(),
        series_mean: center,
        residual_variance: fit.residual_variance,
        residuals: fit.residuals.iter().copied().collect(),
    })
}

fn check_sample(series: &[f64], order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::invalid("AR order must be >= 1"));
    }
    let n = series.len();
    if n < order + MIN_EXTRA_OBS || n - order <= order {
        return Err(Error::InsufficientData(format!(
            "AR({order}) needs at least {} observations, got {n}",
            (order + MIN_EXTRA_OBS).max(2 * order + 1)
        )));
    }
    Ok(())
}

/// Iterates the centered recursion from the last `p` observations
/// (chronological order) for `horizon` steps.
pub fn forecast(model: &ArModel, recent: &[f64], horizon: usize) -> Result<ForecastPath> {
    let p = model.order();
    if horizon == 0 {
        return Err(Error::invalid("forecast horizon must be >= 1"));
    }
    if recent.len() != p {
        return Err(Error::invalid(format!(
            "forecast needs {p} recent observations, got {}",
            recent.len()
        )));
    }
    let mut history: Vec<f64> = recent.iter().map(|y| y - model.series_mean).collect();
    let mut point = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let len = history.len();
        let next: f64 = model
            .beta
            .iter()
            .enumerate()
            .map(|(j, b)| b * history[len - 1 - j])
            .sum();
        history.push(next);
        point.push(next + model.series_mean);
    }

    let psi = model.psi_weights(horizon);
    let mut acc = 0.0;
    let err_std = psi
        .iter()
        .map(|w| {
            acc += w * w;
            (model.residual_variance * acc).sqrt()
        })
        .collect();
    Ok(ForecastPath { point, err_std })
}
