//! Research engine for multivariate pair trading.
//!
//! The crate finds portfolio weights that trade off AR-model predictability
//! against volatility of the portfolio log-price series (VMAT), turns them into
//! participation signals by controlling the probability of profiting within a
//! fixed horizon, and evaluates the resulting strategies (and their
//! cointegration baselines) with an independent-per-day backtester.
//!
//! Module map:
//!
//! - [`market_data`]: CSV ingestion, row alignment and formation windows.
//! - [`stats`]: OLS, symmetric top eigenpair, normal / chi-square distribution
//!   functions and the Ljung-Box test.
//! - [`ar`]: AR(p) fitting, ψ-weights and multi-step forecasts.
//! - [`weights`]: the trade-off objective, its K matrix, MaxVar and
//!   cointegration vectors, and the coordinate-ascent solver.
//! - [`signal`]: threshold equations and the three-way participation rule.
//! - [`lambda`]: λ selection by cross-validation or by Ljung-Box backward search.
//! - [`backtest`]: per-day trade execution with greedy bail and report metrics.
//! - [`synth`]: seeded synthetic panels with known ground truth.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ar;
pub mod backtest;
pub mod error;
pub mod lambda;
pub mod market_data;
pub mod signal;
pub mod stats;
pub mod synth;
pub mod weights;

pub use error::{Error, Result};
