//! Participation signals.
//!
//! A signal compares the current portfolio value `y_t` with a pair of
//! thresholds: go long (`+1`) below the long threshold, short (`-1`) above
//! the short threshold, otherwise stay out. Thresholds come either from the
//! AR forecast path, by solving
//!
//! ```text
//! Π_{i=1..d} Φ((σ_short - ŷ_{t+i}) / err_i) = α
//! Π_{i=1..d} Φ((σ_long  - ŷ_{t+i}) / err_i) = 1 - α
//! ```
//!
//! or, for the cointegration baseline, from a normal quantile of the
//! formation-period distribution of the spread.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ar::ForecastPath;
use crate::error::{Error, Result};
use crate::stats;

/// Stop once the product is this close to its target.
pub const PRODUCT_TOLERANCE: f64 = 1e-10;
pub const MAX_BISECTIONS: usize = 200;
const MAX_BRACKET_DOUBLINGS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdMethod {
    ArProduct,
    StationaryQuantile,
}

/// How the baseline's quantile level is computed from `α` and `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantileConvention {
    /// `q = (1 - α)^{1/d} / 2`, exactly as written.
    #[default]
    Literal,
    /// `q = 1 - (1 - α^{1/d}) / 2`, the upper tail at per-step coverage.
    UpperTail,
}

impl fmt::Display for QuantileConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantileConvention::Literal => "literal",
            QuantileConvention::UpperTail => "upper-tail",
        })
    }
}

impl FromStr for QuantileConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "upper-tail" => Ok(Self::UpperTail),
            other => Err(Error::invalid(format!("unknown quantile convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub long_threshold: f64,
    pub short_threshold: f64,
    pub method: ThresholdMethod,
    pub alpha: f64,
    pub horizon: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signal {
    pub delta: i8,
    pub y_now: f64,
    pub thresholds: ThresholdPair,
}

/// `Π Φ((σ - ŷ_i)/err_i)`, nondecreasing in `σ`.
pub fn coverage_product(path: &ForecastPath, sigma: f64) -> f64 {
    path.point
        .iter()
        .zip(&path.err_std)
        .map(|(y, e)| stats::normal_cdf((sigma - y) / e))
        .product()
}

/// Solves the forecast-interval product equations by bracketed bisection.
pub fn ar_thresholds(path: &ForecastPath, alpha: f64) -> Result<ThresholdPair> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "AR thresholds need 0.5 < alpha < 1, got {alpha}"
        )));
    }
    if path.point.is_empty() || path.point.len() != path.err_std.len() {
        return Err(Error::invalid("forecast path is empty or ragged"));
    }
    if !path.is_finite() {
        return Err(Error::NonFiniteForecast);
    }
    if path.err_std.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::invalid("forecast errors must be positive"));
    }
    Ok(ThresholdPair {
        long_threshold: solve_product(path, 1.0 - alpha)?,
        short_threshold: solve_product(path, alpha)?,
        method: ThresholdMethod::ArProduct,
        alpha,
        horizon: path.horizon(),
    })
}

fn solve_product(path: &ForecastPath, target: f64) -> Result<f64> {
    let f = |s: f64| coverage_product(path, s) - target;
    let min_y = path.point.iter().copied().fold(f64::INFINITY, f64::min);
    let max_y = path.point.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_e = path.err_std.iter().copied().fold(0.0, f64::max);

    let mut lo = min_y - 10.0 * max_e;
    let mut hi = max_y + 10.0 * max_e;
    let mut step = 10.0 * max_e;
    let mut doublings = 0;
    while f(lo) > 0.0 {
        step *= 2.0;
        lo -= step;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS || !lo.is_finite() {
            return Err(Error::NonFiniteForecast);
        }
    }
    let mut step = 10.0 * max_e;
    while f(hi) < 0.0 {
        step *= 2.0;
        hi += step;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NonFiniteForecast);
        }
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v.abs() <= PRODUCT_TOLERANCE {
            break;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Baseline quantile level for horizon `d`.
pub fn quantile_level(alpha: f64, horizon: usize, convention: QuantileConvention) -> f64 {
    let d = horizon as f64;
    match convention {
        QuantileConvention::Literal => (1.0 - alpha).powf(1.0 / d) / 2.0,
        QuantileConvention::UpperTail => 1.0 - (1.0 - alpha.powf(1.0 / d)) / 2.0,
    }
}

/// Stationary-distribution thresholds from the formation series.
pub fn stationary_thresholds(
    formation_series: &[f64],
    alpha: f64,
    horizon: usize,
    convention: QuantileConvention,
) -> Result<ThresholdPair> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha {alpha} outside (0,1)")));
    }
    if horizon == 0 {
        return Err(Error::invalid("horizon must be >= 1"));
    }
    let q = quantile_level(alpha, horizon, convention);
    let mut pair = stationary_thresholds_at_level(formation_series, q)?;
    pair.alpha = alpha;
    pair.horizon = horizon;
    Ok(pair)
}

/// Short threshold at quantile `q` of `N(μ̂, σ̂²)`; the long threshold is its
/// reflection about `μ̂`.
pub fn stationary_thresholds_at_level(formation_series: &[f64], q: f64) -> Result<ThresholdPair> {
    if formation_series.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "stationary thresholds need 10 observations, got {}",
            formation_series.len()
        )));
    }
    let mu = stats::mean(formation_series);
    let var = stats::sample_variance(formation_series);
    if !(var > 0.0) {
        return Err(Error::DegenerateSeries);
    }
    let short = stats::normal_quantile(q, mu, var)?;
    Ok(ThresholdPair {
        long_threshold: 2.0 * mu - short,
        short_threshold: short,
        method: ThresholdMethod::StationaryQuantile,
        alpha: f64::NAN,
        horizon: 0,
    })
}

/// The three-way rule, tested in display order: long first, then short.
pub fn make_signal(y_now: f64, thresholds: ThresholdPair) -> Signal {
    let delta = if y_now < thresholds.long_threshold {
        1
    } else if y_now > thresholds.short_threshold {
        -1
    } else {
        0
    };
    Signal {
        delta,
        y_now,
        thresholds,
    }
}
