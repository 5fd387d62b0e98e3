//! Seeded synthetic price panels with known structure.
//!
//! Log prices are built as
//!
//! ```text
//! x_t = x_base + a·τ_t + h·s_t/‖h‖² + Σ_f u_f·f_t
//! ```
//!
//! with `τ` a Gaussian random walk (the common trend, loading `a ⟂ h`), `s`
//! a stationary AR(1) spread so that `hᵀx_t - hᵀx_base = s_t` exactly, and
//! optional extra factors `f` along directions `u_f`, each an AR process on
//! levels or (when integrated) on increments.
//!
//! Randomness: ChaCha8 seeded with `seed_from_u64(seed)`; standard normals
//! from `rand_distr::StandardNormal`. Per time step the draws are taken in the
//! fixed order trend, spread, then each factor in declaration order, and every
//! draw is consumed even when its scale is zero, so changing one volatility
//! never shifts the other streams.

use chrono::{Datelike, NaiveDate, Weekday};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::PricePanel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub direction: Vec<f64>,
    pub sigma: f64,
    /// AR coefficients of the factor (on increments when `integrated`).
    pub ar: Vec<f64>,
    pub integrated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub k: usize,
    pub length: usize,
    /// Ground-truth cointegration vector `h`.
    pub hedge_vector: Vec<f64>,
    pub spread_phi: f64,
    pub spread_sigma: f64,
    pub trend_sigma: f64,
    /// Trend loading; `None` derives a unit vector orthogonal to `h`.
    pub trend_loading: Option<Vec<f64>>,
    pub factors: Vec<FactorSpec>,
    pub base_log_price: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self::pair(42)
    }
}

impl SynthSpec {
    /// Cointegrated pair with hedge ratio 1.5: φ = 0.9, σ_spread = 0.01,
    /// σ_trend = 0.02, T = 1500.
    pub fn pair(seed: u64) -> Self {
        Self {
            k: 2,
            length: 1500,
            hedge_vector: vec![1.0, -1.5],
            spread_phi: 0.9,
            spread_sigma: 0.01,
            trend_sigma: 0.02,
            trend_loading: None,
            factors: vec![],
            base_log_price: 100f64.ln(),
            seed,
        }
    }

    /// Three assets: a faster-reverting pair (φ = 0.6) on assets 1-2 plus an
    /// independent AR(1) factor on asset 3 (φ = 0.8, σ = 0.05), more
    /// volatile than the spread and orthogonal to both the hedge vector and
    /// the trend.
    pub fn with_volatile_factor(seed: u64) -> Self {
        Self {
            k: 3,
            length: 1500,
            hedge_vector: vec![1.0, -1.5, 0.0],
            spread_phi: 0.6,
            spread_sigma: 0.01,
            trend_sigma: 0.02,
            trend_loading: Some(vec![1.5, 1.0, 0.0]),
            factors: vec![FactorSpec {
                direction: vec![0.0, 0.0, 1.0],
                sigma: 0.05,
                ar: vec![0.8],
                integrated: false,
            }],
            base_log_price: 100f64.ln(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::TooFewTickers(self.k));
        }
        if self.length < 2 {
            return Err(Error::invalid("synthetic panel needs at least 2 rows"));
        }
        if self.hedge_vector.len() != self.k || self.hedge_vector.iter().all(|v| *v == 0.0) {
            return Err(Error::invalid("hedge vector must be nonzero with k entries"));
        }
        if !(self.spread_phi.abs() < 1.0) {
            return Err(Error::invalid("spread AR coefficient must satisfy |phi| < 1"));
        }
        if !(self.spread_sigma >= 0.0 && self.trend_sigma >= 0.0) {
            return Err(Error::invalid("volatilities must be non-negative"));
        }
        if let Some(a) = &self.trend_loading {
            if a.len() != self.k {
                return Err(Error::invalid("trend loading must have k entries"));
            }
        }
        for f in &self.factors {
            if f.direction.len() != self.k || !(f.sigma >= 0.0) {
                return Err(Error::invalid("factor direction must have k entries and sigma >= 0"));
            }
        }
        Ok(())
    }

    pub fn trend_direction(&self) -> DVector<f64> {
        let h = DVector::from_column_slice(&self.hedge_vector).normalize();
        let raw = match &self.trend_loading {
            Some(a) => return DVector::from_column_slice(a).normalize(),
            None if self.k == 2 => DVector::from_vec(vec![-h[1], h[0]]),
            None => {
                let ones = DVector::from_element(self.k, 1.0);
                let proj = &ones - &h * h.dot(&ones);
                if proj.norm() > 1e-8 {
                    proj
                } else {
                    let mut e1 = DVector::zeros(self.k);
                    e1[0] = 1.0;
                    &e1 - &h * h[0]
                }
            }
        };
        let v = raw.normalize();
        // keep the loading mostly long so prices co-move upward with the trend
        if v.sum() < 0.0 { -v } else { v }
    }
}

fn business_days(n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d.succ_opt().expect("date overflow");
    }
    out
}

/// Builds the panel described by `spec`; bit-identical for identical specs.
pub fn generate(spec: &SynthSpec) -> Result<PricePanel> {
    spec.validate()?;
    let k = spec.k;
    let n = spec.length;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut normal = move || -> f64 { rng.sample(StandardNormal) };

    let h = DVector::from_column_slice(&spec.hedge_vector);
    let spread_load = &h / h.norm_squared();
    let trend_load = spec.trend_direction();
    let factor_dirs: Vec<DVector<f64>> = spec
        .factors
        .iter()
        .map(|f| DVector::from_column_slice(&f.direction))
        .collect();

    let stationary_sd = spec.spread_sigma / (1.0 - spec.spread_phi.powi(2)).sqrt();
    let mut trend = 0.0;
    let mut spread = 0.0;
    // per factor: AR state history (most recent last) and integrated level
    let mut factor_hist: Vec<Vec<f64>> = spec.factors.iter().map(|f| vec![0.0; f.ar.len()]).collect();
    let mut factor_level = vec![0.0; spec.factors.len()];

    let mut logs = DMatrix::zeros(n, k);
    for t in 0..n {
        let e_trend = normal();
        let e_spread = normal();
        if t == 0 {
            trend = spec.trend_sigma * e_trend;
            spread = stationary_sd * e_spread;
        } else {
            trend += spec.trend_sigma * e_trend;
            spread = spec.spread_phi * spread + spec.spread_sigma * e_spread;
        }
        let mut x = DVector::from_element(k, spec.base_log_price) + &trend_load * trend + &spread_load * spread;

        for (fi, f) in spec.factors.iter().enumerate() {
            let e = normal();
            let hist = &mut factor_hist[fi];
            let p = f.ar.len();
            let z: f64 = f.ar.iter().enumerate().map(|(j, b)| b * hist[p - 1 - j]).sum::<f64>() + f.sigma * e;
            if p > 0 {
                hist.remove(0);
                hist.push(z);
            }
            let level = if f.integrated {
                factor_level[fi] += z;
                factor_level[fi]
            } else {
                z
            };
            x += &factor_dirs[fi] * level;
        }
        logs.set_row(t, &x.transpose());
    }

    let tickers = (1..=k).map(|i| format!("S{i}")).collect();
    PricePanel::new(business_days(n), tickers, logs.map(f64::exp))
}
