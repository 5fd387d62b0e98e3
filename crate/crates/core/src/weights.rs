//! Portfolio weight vectors.
//!
//! The trade-off objective for weights `w` (unit L2) and AR coefficients `β`
//! over a formation window of log prices `x_0..x_L` is
//!
//! ```text
//! J(w, β) = -Σ_i (c_i·w - Σ_j β_j c_{i-j}·w)²  +  λ Σ_i (c_i·w)²
//! ```
//!
//! where `i` runs over the `L + 1 - p` rows that have `p` lags and
//! `c_i = x_i - x̄` is centered by the mean over those same rows. Both sums are
//! quadratic forms in `w`, so `J(w, β) = wᵀ K(β) w`. For fixed `w` the AR
//! term is minimized by OLS on the centered portfolio series; for fixed `β`
//! the maximizer on the unit sphere is the top eigenvector of `K(β)`.
//! Alternating the two gives the coordinate-ascent solver [`vmat_descent`].

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ar::{self, ArModel};
use crate::error::{Error, Result};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMethod {
    Coint,
    MaxVar,
}

impl std::str::FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coint" => Ok(Self::Coint),
            "maxvar" => Ok(Self::MaxVar),
            other => Err(Error::invalid(format!("unknown init method '{other}'"))),
        }
    }
}

impl InitMethod {
    /// Hedge regression for pairs, MaxVar otherwise.
    pub fn default_for(k: usize) -> Self {
        if k == 2 {
            InitMethod::Coint
        } else {
            InitMethod::MaxVar
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormState {
    UnitL2,
    UnitL1,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub init: Option<InitMethod>,
    pub lambda: Option<f64>,
    pub steps_run: usize,
    /// Objective after the initial β fit and after every half-step.
    pub objective_trace: Vec<f64>,
    /// Unit-L2 weights after each full step.
    pub iterates: Vec<DVector<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioWeights {
    pub w: DVector<f64>,
    pub norm_state: NormState,
    pub provenance: Provenance,
}

impl PortfolioWeights {
    fn unit_l2(w: DVector<f64>, provenance: Provenance) -> Self {
        Self {
            w: stats::orient(w),
            norm_state: NormState::UnitL2,
            provenance,
        }
    }

    /// Rescales to unit L1 (the trading normalization).
    pub fn to_unit_l1(&self) -> Self {
        let l1 = self.w.lp_norm(1);
        Self {
            w: &self.w / l1,
            norm_state: NormState::UnitL1,
            provenance: self.provenance.clone(),
        }
    }

    /// The same direction with unit L2 norm.
    pub fn direction(&self) -> DVector<f64> {
        self.w.normalize()
    }

    /// `wᵀ x_i` for every row of a log-price matrix.
    pub fn project(&self, log_prices: &DMatrix<f64>) -> Vec<f64> {
        (log_prices * &self.w).iter().copied().collect()
    }
}

/// Angle in radians between two directions, ignoring sign.
pub fn angle_between(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let a = a.normalize();
    let mut b = b.normalize();
    if a.dot(&b) < 0.0 {
        b.neg_mut();
    }
    // chord form stays accurate for tiny angles where acos does not
    2.0 * ((&a - &b).norm() / 2.0).min(1.0).asin()
}

/// Predictability + λ·volatility over one formation window.
#[derive(Debug, Clone)]
pub struct TradeoffObjective {
    lambda: f64,
    log_window: DMatrix<f64>,
    order: usize,
    centered: DMatrix<f64>,
}

impl TradeoffObjective {
    pub fn new(lambda: f64, log_window: DMatrix<f64>, order: usize) -> Result<Self> {
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!("lambda {lambda} must be >= 1")));
        }
        if order == 0 {
            return Err(Error::invalid("AR order must be >= 1"));
        }
        let n = log_window.nrows();
        if n < order + ar::MIN_EXTRA_OBS || n - order <= order {
            return Err(Error::InsufficientData(format!(
                "window of {n} rows cannot fit AR({order})"
            )));
        }
        if log_window.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("log window".into()));
        }
        let rows = n - order;
        let center = log_window.rows(order, rows).row_mean();
        let mut centered = log_window.clone();
        for mut row in centered.row_iter_mut() {
            row -= &center;
        }
        Ok(Self {
            lambda,
            log_window,
            order,
            centered,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn log_window(&self) -> &DMatrix<f64> {
        &self.log_window
    }

    pub fn n_assets(&self) -> usize {
        self.log_window.ncols()
    }

    /// The same window and order with another λ.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!("lambda {lambda} must be >= 1")));
        }
        Ok(Self { lambda, ..self.clone() })
    }

    fn rows(&self) -> std::ops::Range<usize> {
        self.order..self.log_window.nrows()
    }

    /// Centered scatter `Σ c_i c_iᵀ` over the objective's row set.
    pub fn scatter(&self) -> DMatrix<f64> {
        let c = self.centered.rows(self.order, self.rows().len());
        c.transpose() * c
    }

    /// `Σ r_i r_iᵀ` with `r_i = c_i - Σ_j β_j c_{i-j}`.
    fn residual_scatter(&self, beta: &[f64]) -> DMatrix<f64> {
        let r = self.ar_residual_rows(beta);
        r.transpose() * r
    }

    fn ar_residual_rows(&self, beta: &[f64]) -> DMatrix<f64> {
        let p = self.order;
        let rows = self.rows().len();
        let mut r = self.centered.rows(p, rows).into_owned();
        for (j, b) in beta.iter().enumerate() {
            r -= self.centered.rows(p - 1 - j, rows) * *b;
        }
        r
    }

    /// Direct evaluation of `J(w, β)`.
    pub fn objective_value(&self, w: &DVector<f64>, beta: &[f64]) -> Result<f64> {
        self.check_beta(beta)?;
        let y = &self.log_window * w;
        let p = self.order;
        let rows = self.rows();
        let m = y.rows(p, rows.len()).mean();
        let mut vol = 0.0;
        let mut sse = 0.0;
        for i in rows {
            let c = y[i] - m;
            let pred: f64 = beta.iter().enumerate().map(|(j, b)| b * (y[i - 1 - j] - m)).sum();
            vol += c * c;
            sse += (c - pred).powi(2);
        }
        Ok(-sse + self.lambda * vol)
    }

    /// The symmetric `K(β)` with `wᵀ K(β) w = J(w, β)`.
    pub fn k_matrix(&self, beta: &[f64]) -> Result<DMatrix<f64>> {
        self.check_beta(beta)?;
        let k = self.scatter() * self.lambda - self.residual_scatter(beta);
        Ok((&k + k.transpose()) * 0.5)
    }

    /// OLS AR fit on the portfolio series `X w`, centered consistently with
    /// the objective. This is the exact β-maximizer of `J(w, ·)`.
    pub fn fit_beta(&self, w: &DVector<f64>) -> Result<ArModel> {
        let y: Vec<f64> = (&self.log_window * w).iter().copied().collect();
        let m = stats::mean(&y[self.order..]);
        ar::fit_ar_about(&y, self.order, m)
    }

    /// Top eigenvector of the centered scatter over the objective's rows.
    pub fn maxvar_weights(&self) -> Result<PortfolioWeights> {
        top_scatter_direction(self.scatter(), InitMethod::MaxVar)
    }

    fn check_beta(&self, beta: &[f64]) -> Result<()> {
        if beta.len() != self.order {
            return Err(Error::invalid(format!(
                "beta has {} coefficients, objective order is {}",
                beta.len(),
                self.order
            )));
        }
        Ok(())
    }
}

fn top_scatter_direction(scatter: DMatrix<f64>, tag: InitMethod) -> Result<PortfolioWeights> {
    if scatter.amax() <= 0.0 {
        return Err(Error::DegenerateDirection("zero scatter".into()));
    }
    let top = stats::top_eigenpair(&scatter)?;
    Ok(PortfolioWeights::unit_l2(
        top.vector,
        Provenance {
            init: Some(tag),
            ..Provenance::default()
        },
    ))
}

/// Direction of maximal variance of the (row-centered) log window.
pub fn maxvar_weights(log_window: &DMatrix<f64>) -> Result<PortfolioWeights> {
    if log_window.nrows() < 2 {
        return Err(Error::InsufficientData("maxvar needs at least 2 rows".into()));
    }
    let center = log_window.row_mean();
    let mut c = log_window.clone();
    for mut row in c.row_iter_mut() {
        row -= &center;
    }
    top_scatter_direction(c.transpose() * &c, InitMethod::MaxVar)
}

/// Hedge regression of asset 1 on assets `2..k` plus an intercept; the
/// weights are `(1, -γ₂, …, -γ_k)` rescaled to unit L2.
pub fn coint_weights(log_window: &DMatrix<f64>) -> Result<PortfolioWeights> {
    let (n, k) = log_window.shape();
    if k < 2 {
        return Err(Error::TooFewTickers(k));
    }
    if n < k + 5 {
        return Err(Error::InsufficientData(format!(
            "hedge regression needs {} rows, got {n}",
            k + 5
        )));
    }
    let design = DMatrix::from_fn(n, k, |i, j| if j == 0 { 1.0 } else { log_window[(i, j)] });
    let response = log_window.column(0).into_owned();
    let fit = stats::ols(&design, &response)?;
    let w = DVector::from_fn(k, |j, _| if j == 0 { 1.0 } else { -fit.coefficients[j] });
    Ok(PortfolioWeights::unit_l2(
        w,
        Provenance {
            init: Some(InitMethod::Coint),
            ..Provenance::default()
        },
    ))
}

/// Result of [`vmat_descent`]: unit-L1 weights plus the last AR fit (on the
/// unit-L2 series).
#[derive(Debug, Clone)]
pub struct Descent {
    pub weights: PortfolioWeights,
    pub fit: ArModel,
}

/// Alternates `β ← OLS(w)` and `w ← top eigenvector of K(β)` for `n_steps`
/// full steps, starting from the cointegration or MaxVar vector.
pub fn vmat_descent(obj: &TradeoffObjective, init: InitMethod, n_steps: usize) -> Result<Descent> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be >= 1"));
    }
    let start = match init {
        InitMethod::Coint => coint_weights(obj.log_window())?,
        InitMethod::MaxVar => obj.maxvar_weights()?,
    };
    let degenerate = |e: Error| match e {
        Error::RankDeficient | Error::DegenerateSeries => {
            Error::DegenerateDirection(format!("AR fit failed: {e}"))
        }
        other => other,
    };

    let mut w = start.w;
    let mut fit = obj.fit_beta(&w).map_err(degenerate)?;
    let mut trace = vec![obj.objective_value(&w, &fit.beta)?];
    let mut iterates = Vec::with_capacity(n_steps);
    for _ in 0..n_steps {
        let k = obj.k_matrix(&fit.beta)?;
        w = stats::top_eigenpair(&k)?.vector;
        trace.push(obj.objective_value(&w, &fit.beta)?);
        fit = obj.fit_beta(&w).map_err(degenerate)?;
        trace.push(obj.objective_value(&w, &fit.beta)?);
        iterates.push(w.clone());
    }

    let provenance = Provenance {
        init: Some(init),
        lambda: Some(obj.lambda()),
        steps_run: n_steps,
        objective_trace: trace,
        iterates,
    };
    let weights = PortfolioWeights::unit_l2(w, provenance).to_unit_l1();
    Ok(Descent { weights, fit })
}
