//! Per-day strategy execution and report metrics.
//!
//! Every evaluation day is an independent trade: weights and thresholds are
//! built from the formation window ending that day, the signal is taken at
//! the close, and the position is closed at the first later day it shows a
//! profit (greedy bail) or, failing that, marked to market after `d` days.
//! Profit and loss is the log return of the unit-L1 portfolio, attributed to
//! the entry day.

use std::fmt;
use std::io::Write;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ar;
use crate::error::{Error, Result};
use crate::lambda::{self, LambdaGrid};
use crate::market_data::PricePanel;
use crate::signal::{self, QuantileConvention, ThresholdPair};
use crate::weights::{self, InitMethod, PortfolioWeights, TradeoffObjective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Coint,
    CointAr,
    MaxVarAr,
    Vmat,
    VmatCv,
    VmatTame,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Coint,
        Method::CointAr,
        Method::MaxVarAr,
        Method::Vmat,
        Method::VmatCv,
        Method::VmatTame,
    ];

    /// Row label used in comparison tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Coint => "Coint",
            Method::CointAr => "Coint AR",
            Method::MaxVarAr => "MaxVar AR",
            Method::Vmat => "VMAT",
            Method::VmatCv => "VMAT CV",
            Method::VmatTame => "VMAT Tame",
        }
    }

    /// Identifier used on the command line and in file names.
    pub fn slug(self) -> &'static str {
        match self {
            Method::Coint => "coint",
            Method::CointAr => "coint-ar",
            Method::MaxVarAr => "maxvar-ar",
            Method::Vmat => "vmat",
            Method::VmatCv => "vmat-cv",
            Method::VmatTame => "vmat-tame",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.slug() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    #[default]
    Fixed,
    Cv,
    Tame,
}

impl FromStr for LambdaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Self::Fixed),
            "cv" => Ok(Self::Cv),
            "tame" => Ok(Self::Tame),
            other => Err(Error::invalid(format!("unknown lambda mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSettings {
    pub mode: LambdaMode,
    /// λ used in fixed mode.
    pub value: f64,
    pub grid: LambdaGrid,
    pub cv_lookback: usize,
    /// Ljung-Box lag; `None` means `2p`.
    pub lb_lag: Option<usize>,
    pub lb_alpha: f64,
}

impl Default for LambdaSettings {
    fn default() -> Self {
        Self {
            mode: LambdaMode::Fixed,
            value: 1.0,
            grid: LambdaGrid::default(),
            cv_lookback: 10,
            lb_lag: None,
            lb_alpha: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyConfig {
    pub method: Method,
    /// Trading horizon `d` in days.
    pub horizon: usize,
    /// AR lag order `p`.
    pub order: usize,
    /// Formation length `L`.
    pub formation: usize,
    pub alpha: f64,
    pub lambda: LambdaSettings,
    pub quantile_convention: QuantileConvention,
    pub n_steps: usize,
    /// `None` picks [`InitMethod::default_for`] the asset count.
    pub init: Option<InitMethod>,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self {
            method: Method::Vmat,
            horizon: 7,
            order: 10,
            formation: 60,
            alpha: 0.999,
            lambda: LambdaSettings::default(),
            quantile_convention: QuantileConvention::Literal,
            n_steps: 1,
            init: None,
        }
    }
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::invalid("horizon d must be >= 1"));
        }
        if self.order < 1 {
            return Err(Error::invalid("AR order p must be >= 1"));
        }
        if self.formation < self.order + 10 {
            return Err(Error::invalid(format!(
                "formation length L = {} must be at least p + 10 = {}",
                self.formation,
                self.order + 10
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(format!("alpha {} outside (0,1)", self.alpha)));
        }
        if self.n_steps < 1 {
            return Err(Error::invalid("n_steps must be >= 1"));
        }
        if !(self.lambda.value >= 1.0) {
            return Err(Error::invalid("lambda must be >= 1"));
        }
        if self.lambda.cv_lookback < 1 {
            return Err(Error::invalid("cv lookback must be >= 1"));
        }
        if !(self.lambda.lb_alpha > 0.0 && self.lambda.lb_alpha < 1.0) {
            return Err(Error::invalid("Ljung-Box significance must be in (0,1)"));
        }
        Ok(())
    }

    /// How λ is resolved for this method (`None` for non-VMAT methods).
    pub fn lambda_mode(&self) -> Option<LambdaMode> {
        match self.method {
            Method::Vmat => Some(self.lambda.mode),
            Method::VmatCv => Some(LambdaMode::Cv),
            Method::VmatTame => Some(LambdaMode::Tame),
            _ => None,
        }
    }

    pub fn lb_lag(&self) -> usize {
        self.lambda.lb_lag.unwrap_or(2 * self.order)
    }

    /// First index at which a trade has a full formation window.
    pub fn first_tradable(&self) -> usize {
        self.formation + self.order
    }

    /// First index that every method (including CV with its lookback) can
    /// trade; the default start of an evaluation range.
    pub fn warmup(&self) -> usize {
        self.first_tradable() + self.horizon + self.lambda.cv_lookback
    }

    pub fn with_method(&self, method: Method) -> Self {
        Self { method, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeDecision {
    pub time_index: usize,
    /// Unit-L1 weights; absent if the window was degenerate.
    pub weights: Option<PortfolioWeights>,
    pub y_now: f64,
    pub thresholds: Option<ThresholdPair>,
    pub delta: i8,
    /// Days until the first profit, if one emerged within the horizon.
    pub bail_offset: Option<usize>,
    pub exited_early: bool,
    pub pl: f64,
    pub lambda: Option<f64>,
    /// Why no position was taken, when the strategy could not be built.
    pub diagnostic: Option<String>,
}

impl TradeDecision {
    fn no_signal(time_index: usize, diagnostic: String) -> Self {
        Self {
            time_index,
            weights: None,
            y_now: f64::NAN,
            thresholds: None,
            delta: 0,
            bail_offset: None,
            exited_early: false,
            pl: 0.0,
            lambda: None,
            diagnostic: Some(diagnostic),
        }
    }
}

/// `Σ_j w_j log X_{row, j}`.
pub fn portfolio_value(panel: &PricePanel, row: usize, w: &DVector<f64>) -> f64 {
    w.iter()
        .enumerate()
        .map(|(j, wj)| wj * panel.log_price(row, j))
        .sum()
}

/// Enters at `t` with the given weights and thresholds, applies the greedy
/// bail rule over `1..=horizon` and books the result.
pub fn execute_trade(
    panel: &PricePanel,
    t: usize,
    horizon: usize,
    weights: PortfolioWeights,
    thresholds: ThresholdPair,
) -> Result<TradeDecision> {
    if t + horizon >= panel.len() {
        return Err(Error::WindowOutOfRange {
            start: t as isize,
            end: t + horizon,
            len: panel.len(),
        });
    }
    let y_now = portfolio_value(panel, t, &weights.w);
    let sig = signal::make_signal(y_now, thresholds);
    let delta = sig.delta;
    let mut bail_offset = None;
    let mut pl = 0.0;
    if delta != 0 {
        let sign = f64::from(delta);
        for k in 1..=horizon {
            let gain = sign * (portfolio_value(panel, t + k, &weights.w) - y_now);
            if gain > 0.0 || k == horizon {
                pl = gain;
                if gain > 0.0 {
                    bail_offset = Some(k);
                }
                break;
            }
        }
    }
    Ok(TradeDecision {
        time_index: t,
        lambda: weights.provenance.lambda,
        weights: Some(weights),
        y_now,
        thresholds: Some(thresholds),
        delta,
        bail_offset,
        exited_early: bail_offset.is_some(),
        pl,
        diagnostic: None,
    })
}

/// Runs one configured strategy at index `t`. Degenerate windows produce a
/// flat decision with a diagnostic rather than an error.
pub fn run_trade(panel: &PricePanel, t: usize, cfg: &StrategyConfig) -> Result<TradeDecision> {
    cfg.validate()?;
    if t < cfg.first_tradable() || t + cfg.horizon >= panel.len() {
        return Err(Error::WindowOutOfRange {
            start: t as isize - cfg.first_tradable() as isize,
            end: t + cfg.horizon,
            len: panel.len(),
        });
    }
    match plan_trade(panel, t, cfg) {
        Ok((weights, thresholds)) => execute_trade(panel, t, cfg.horizon, weights, thresholds),
        Err(e) => Ok(TradeDecision::no_signal(t, e.to_string())),
    }
}

fn plan_trade(panel: &PricePanel, t: usize, cfg: &StrategyConfig) -> Result<(PortfolioWeights, ThresholdPair)> {
    let window = panel.log_window(t, cfg.formation)?;
    let init = cfg.init.unwrap_or_else(|| InitMethod::default_for(panel.n_assets()));

    let l2 = match cfg.method {
        Method::Coint | Method::CointAr => weights::coint_weights(&window)?,
        Method::MaxVarAr => weights::maxvar_weights(&window)?,
        Method::Vmat | Method::VmatCv | Method::VmatTame => {
            let base = TradeoffObjective::new(1.0, window.clone(), cfg.order)?;
            let lambda = match cfg.lambda_mode().unwrap_or_default() {
                LambdaMode::Fixed => cfg.lambda.value,
                LambdaMode::Cv => {
                    lambda::select_cv(panel, t, &cfg.lambda.grid, cfg.lambda.cv_lookback, cfg)?.chosen_lambda
                }
                LambdaMode::Tame => {
                    lambda::select_tame(
                        |l| base.with_lambda(l),
                        &cfg.lambda.grid,
                        init,
                        cfg.n_steps,
                        cfg.lb_lag(),
                        cfg.lambda.lb_alpha,
                    )?
                    .chosen_lambda
                }
            };
            let obj = base.with_lambda(lambda)?;
            weights::vmat_descent(&obj, init, cfg.n_steps)?.weights
        }
    };
    let w = l2.to_unit_l1();

    let series: Vec<f64> = (0..window.nrows())
        .map(|i| w.w.iter().enumerate().map(|(j, wj)| wj * window[(i, j)]).sum())
        .collect();
    let thresholds = match cfg.method {
        Method::Coint => {
            signal::stationary_thresholds(&series, cfg.alpha, cfg.horizon, cfg.quantile_convention)?
        }
        _ => {
            let model = ar::fit_ar(&series, cfg.order)?;
            let recent = &series[series.len() - cfg.order..];
            let path = ar::forecast(&model, recent, cfg.horizon)?;
            signal::ar_thresholds(&path, cfg.alpha)?
        }
    };
    Ok((w, thresholds))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub pl_mean: f64,
    pub pl_se: f64,
    pub signal_rate: f64,
    pub control_rate: f64,
    pub profit_rate: f64,
    /// Worst single-trade PL, capped above at zero.
    pub max_drawdown: f64,
    pub decisions: Vec<TradeDecision>,
    pub cumulative_pl: Vec<f64>,
}

impl BacktestReport {
    pub fn from_decisions(decisions: Vec<TradeDecision>) -> Result<Self> {
        let n = decisions.len();
        if n == 0 {
            return Err(Error::invalid("no decisions to aggregate"));
        }
        let mut cumulative_pl = Vec::with_capacity(n);
        let mut total = 0.0;
        for d in &decisions {
            total += d.pl;
            cumulative_pl.push(total);
        }
        let nf = n as f64;
        let pl_mean = total / nf;
        let pl_se = if n > 1 {
            let ss: f64 = decisions.iter().map(|d| (d.pl - pl_mean).powi(2)).sum();
            (ss / (nf - 1.0)).sqrt() / nf.sqrt()
        } else {
            0.0
        };
        let participating = decisions.iter().filter(|d| d.delta != 0).count();
        let controlled = decisions
            .iter()
            .filter(|d| d.delta != 0 && d.bail_offset.is_some())
            .count();
        let profitable = decisions.iter().filter(|d| d.pl > 0.0).count();
        let max_drawdown = decisions
            .iter()
            .filter(|d| d.delta != 0)
            .map(|d| d.pl)
            .fold(0.0, f64::min);
        Ok(Self {
            pl_mean,
            pl_se,
            signal_rate: participating as f64 / nf,
            control_rate: if participating > 0 {
                controlled as f64 / participating as f64
            } else {
                0.0
            },
            profit_rate: profitable as f64 / nf,
            max_drawdown,
            decisions,
            cumulative_pl,
        })
    }

    pub fn n_days(&self) -> usize {
        self.decisions.len()
    }

    /// `pl_mean ± 1.96 · pl_se`.
    pub fn confidence_interval_95(&self) -> (f64, f64) {
        (self.pl_mean - 1.96 * self.pl_se, self.pl_mean + 1.96 * self.pl_se)
    }
}

/// Runs `cfg` independently at every index of `eval_range`. `workers == 0`
/// uses the global thread pool; any worker count gives identical output.
pub fn run_backtest(
    panel: &PricePanel,
    cfg: &StrategyConfig,
    eval_range: Range<usize>,
    workers: usize,
) -> Result<BacktestReport> {
    cfg.validate()?;
    if eval_range.is_empty() {
        return Err(Error::invalid("empty evaluation range"));
    }
    if eval_range.start < cfg.first_tradable() || eval_range.end + cfg.horizon > panel.len() {
        return Err(Error::invalid(format!(
            "evaluation range {:?} must lie within [{}, {})",
            eval_range,
            cfg.first_tradable(),
            panel.len().saturating_sub(cfg.horizon)
        )));
    }
    let job = || {
        eval_range
            .clone()
            .into_par_iter()
            .map(|t| run_trade(panel, t, cfg))
            .collect::<Result<Vec<_>>>()
    };
    let decisions = if workers == 0 {
        job()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(job)?
    };
    BacktestReport::from_decisions(decisions)
}

/// Formats `x` with `sig` significant digits in plain decimal notation.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Comparison table in percent: PL mean (se), SR, CR, PR, maxDraw.
pub fn metric_table(reports: &[(String, &BacktestReport)]) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::invalid("metric table needs at least one report"));
    }
    let width = reports.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(6);
    let mut out = format!(
        "{:<width$}  {:>10} {:>12}  {:>6}  {:>6}  {:>6}  {:>8}\n",
        "", "PL mean", "(se)", "SR", "CR", "PR", "maxDraw"
    );
    for (name, r) in reports {
        out.push_str(&format!(
            "{:<width$}  {:>10} {:>12}  {:>6.1}  {:>6.1}  {:>6.1}  {:>8.1}\n",
            name,
            fmt_sig(100.0 * r.pl_mean, 4),
            format!("({})", fmt_sig(100.0 * r.pl_se, 4)),
            100.0 * r.signal_rate,
            100.0 * r.control_rate,
            100.0 * r.profit_rate,
            100.0 * r.max_drawdown,
        ));
    }
    Ok(out)
}

/// One line of the per-decision CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRow {
    pub t: usize,
    pub delta: i8,
    pub l: Option<usize>,
    pub pl: f64,
    pub y: Option<f64>,
    pub long_threshold: Option<f64>,
    pub short_threshold: Option<f64>,
    pub lambda: Option<f64>,
}

impl From<&TradeDecision> for DecisionRow {
    fn from(d: &TradeDecision) -> Self {
        Self {
            t: d.time_index,
            delta: d.delta,
            l: d.bail_offset,
            pl: d.pl,
            y: d.y_now.is_finite().then_some(d.y_now),
            long_threshold: d.thresholds.map(|t| t.long_threshold),
            short_threshold: d.thresholds.map(|t| t.short_threshold),
            lambda: d.lambda,
        }
    }
}

pub fn write_decisions_csv<W: Write>(report: &BacktestReport, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for d in &report.decisions {
        out.serialize(DecisionRow::from(d))?;
    }
    out.flush().map_err(|e| Error::Csv(e.into()))
}

pub fn read_decisions_csv<R: std::io::Read>(reader: R) -> Result<Vec<DecisionRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// One line of the cumulative-PL CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeRow {
    pub t: usize,
    pub date: String,
    pub pl: f64,
    pub cumulative_pl: f64,
}

pub fn write_cumulative_csv<W: Write>(report: &BacktestReport, panel: &PricePanel, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for (d, c) in report.decisions.iter().zip(&report.cumulative_pl) {
        let date = panel
            .timestamps()
            .get(d.time_index)
            .map(|x| x.to_string())
            .unwrap_or_default();
        out.serialize(CumulativeRow {
            t: d.time_index,
            date,
            pl: d.pl,
            cumulative_pl: *c,
        })?;
    }
    out.flush().map_err(|e| Error::Csv(e.into()))
}
