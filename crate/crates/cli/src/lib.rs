//! Command-line front end: option handling, config files and the five
//! commands (`backtest`, `compare`, `sweep`, `trace`, `synth`).

use std::fs::{self, File};
use std::io::BufWriter;
use std::ops::Range;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use vmat_core::backtest::{self, BacktestReport, LambdaMode, Method, StrategyConfig};
use vmat_core::lambda::{LambdaGrid, DEFAULT_GRID};
use vmat_core::market_data::{self, CsvSchema, PricePanel};
use vmat_core::signal::QuantileConvention;
use vmat_core::synth::{self, SynthSpec};
use vmat_core::weights::{self, InitMethod, TradeoffObjective};

pub const ALPHA_GRID: [f64; 6] = [0.4, 0.65, 0.8, 0.9, 0.95, 0.99];
pub const ORDER_GRID: [f64; 8] = [5.0, 7.0, 10.0, 13.0, 17.0, 21.0, 25.0, 30.0];
pub const FORMATION_GRID: [f64; 6] = [30.0, 40.0, 50.0, 60.0, 70.0, 80.0];

/// Horizon used by `sweep` unless one is given.
pub const SWEEP_HORIZON: usize = 3;
/// Steps run by `trace` unless `--n-steps` is given.
pub const TRACE_STEPS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "vmat", version, about = "Backtests and experiments for VMAT pair trading")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub settings: Settings,

    /// TOML file supplying defaults for any option (keys as the long flag names).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run one method over the evaluation range.
    Backtest,
    /// Run all six methods with shared parameters.
    Compare,
    /// Run VMAT once per value of one parameter.
    Sweep,
    /// Record the solver's weights step by step at one trading time.
    Trace,
    /// Write a synthetic panel.
    Synth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SweepAxis {
    #[value(name = "lambda")]
    #[serde(rename = "lambda")]
    Lambda,
    #[value(name = "alpha")]
    #[serde(rename = "alpha")]
    Alpha,
    #[value(name = "p")]
    #[serde(rename = "p")]
    Order,
    #[value(name = "L")]
    #[serde(rename = "L")]
    Formation,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::Alpha => "alpha",
            SweepAxis::Order => "p",
            SweepAxis::Formation => "L",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepAxis::Lambda => DEFAULT_GRID.to_vec(),
            SweepAxis::Alpha => ALPHA_GRID.to_vec(),
            SweepAxis::Order => ORDER_GRID.to_vec(),
            SweepAxis::Formation => FORMATION_GRID.to_vec(),
        }
    }

    fn apply(self, cfg: &StrategyConfig, value: f64) -> Result<StrategyConfig> {
        let mut cfg = cfg.clone();
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                bail!("{} must be a positive integer, got {v}", self.name())
            }
        };
        match self {
            SweepAxis::Lambda => {
                cfg.lambda.mode = LambdaMode::Fixed;
                cfg.lambda.value = value;
            }
            SweepAxis::Alpha => cfg.alpha = value,
            SweepAxis::Order => cfg.order = as_count(value)?,
            SweepAxis::Formation => cfg.formation = as_count(value)?,
        }
        Ok(cfg)
    }
}

/// Built-in synthetic panels used when no `--data` is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Cointegrated pair.
    #[default]
    Pair,
    /// Faster-reverting pair plus an independent volatile AR(1) asset.
    VolatileFactor,
}

impl Preset {
    pub fn spec(self, seed: u64) -> SynthSpec {
        match self {
            Preset::Pair => SynthSpec::pair(seed),
            Preset::VolatileFactor => SynthSpec::with_volatile_factor(seed),
        }
    }
}

/// Every option, unset by default. Command-line values win over the config
/// file, which wins over built-in defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Price CSV (repeat or comma-separate to align several files).
    #[arg(long, global = true, value_delimiter = ',')]
    pub data: Option<Vec<PathBuf>>,
    /// coint | coint-ar | maxvar-ar | vmat | vmat-cv | vmat-tame
    #[arg(long, global = true)]
    pub method: Option<Method>,
    /// Trading horizon in days.
    #[arg(long, global = true)]
    pub d: Option<usize>,
    /// AR order.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Formation length.
    #[arg(long = "L", global = true)]
    #[serde(rename = "L")]
    pub formation: Option<usize>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// λ for the fixed mode.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// fixed | cv | tame (applies to the plain VMAT method)
    #[arg(long, global = true)]
    pub lambda_mode: Option<LambdaMode>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub lambda_grid: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub cv_lookback: Option<usize>,
    /// Ljung-Box lag (default 2p).
    #[arg(long, global = true)]
    pub lb_lag: Option<usize>,
    /// Ljung-Box significance level.
    #[arg(long, global = true)]
    pub lb_alpha: Option<f64>,
    /// literal | upper-tail
    #[arg(long, global = true)]
    pub coint_quantile_convention: Option<QuantileConvention>,
    /// First evaluated row index (default: warmup).
    #[arg(long, global = true)]
    pub eval_start: Option<usize>,
    /// One past the last evaluated row index (default: last settled day).
    #[arg(long, global = true)]
    pub eval_end: Option<usize>,
    #[arg(long, global = true)]
    pub sweep_axis: Option<SweepAxis>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub sweep_values: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub n_steps: Option<usize>,
    /// coint | maxvar
    #[arg(long, global = true)]
    pub init: Option<InitMethod>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed of the synthetic panel.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Synthetic panel used without `--data`.
    #[arg(long, global = true)]
    pub preset: Option<Preset>,
    /// Length of the synthetic panel.
    #[arg(long, global = true)]
    pub length: Option<usize>,
    /// Row index traced by `trace` (default: last tradable row).
    #[arg(long, global = true)]
    pub at: Option<usize>,
}

macro_rules! prefer {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Settings { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Settings {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set here win over `fallback`.
    pub fn over(self, fallback: Settings) -> Settings {
        let (a, b) = (self, fallback);
        prefer!(a, b; data, method, d, p, formation, alpha, lambda, lambda_mode, lambda_grid, cv_lookback,
            lb_lag, lb_alpha, coint_quantile_convention, eval_start, eval_end, sweep_axis, sweep_values,
            n_steps, init, workers, seed, out, preset, length, at)
    }

    pub fn strategy(&self, command: Command) -> Result<StrategyConfig> {
        let mut cfg = StrategyConfig::default();
        if let Some(m) = self.method {
            cfg.method = m;
        }
        cfg.horizon = self.d.unwrap_or(match command {
            Command::Sweep => SWEEP_HORIZON,
            _ => cfg.horizon,
        });
        cfg.order = self.p.unwrap_or(cfg.order);
        cfg.formation = self.formation.unwrap_or(cfg.formation);
        cfg.alpha = self.alpha.unwrap_or(cfg.alpha);
        cfg.lambda.value = self.lambda.unwrap_or(cfg.lambda.value);
        cfg.lambda.mode = self.lambda_mode.unwrap_or(cfg.lambda.mode);
        if let Some(g) = &self.lambda_grid {
            cfg.lambda.grid = LambdaGrid::new(g.clone())?;
        }
        cfg.lambda.cv_lookback = self.cv_lookback.unwrap_or(cfg.lambda.cv_lookback);
        cfg.lambda.lb_lag = self.lb_lag.or(cfg.lambda.lb_lag);
        cfg.lambda.lb_alpha = self.lb_alpha.unwrap_or(cfg.lambda.lb_alpha);
        cfg.quantile_convention = self.coint_quantile_convention.unwrap_or(cfg.quantile_convention);
        cfg.n_steps = self.n_steps.unwrap_or(match command {
            Command::Trace => TRACE_STEPS,
            _ => cfg.n_steps,
        });
        cfg.init = self.init.or(cfg.init);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(0)
    }

    pub fn synth_spec(&self) -> SynthSpec {
        let mut spec = self.preset.unwrap_or_default().spec(self.seed.unwrap_or(42));
        if let Some(n) = self.length {
            spec.length = n;
        }
        spec
    }

    /// The `--data` files, or the synthetic panel when none are given.
    pub fn load_panel(&self) -> Result<PricePanel> {
        match self.data.as_deref() {
            Some([]) | None => Ok(synth::generate(&self.synth_spec())?),
            Some(paths) => {
                for p in paths {
                    if !p.is_file() {
                        bail!("data file {} does not exist", p.display());
                    }
                }
                let refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
                Ok(market_data::load_many(&refs, &CsvSchema::default())?)
            }
        }
    }

    /// Evaluation rows: `--eval-start` (default `start`) up to `--eval-end`
    /// (default the last row whose horizon is inside the panel).
    pub fn eval_range(&self, panel: &PricePanel, start: usize, horizon: usize) -> Result<Range<usize>> {
        let start = self.eval_start.unwrap_or(start);
        let end = self.eval_end.unwrap_or(panel.len().saturating_sub(horizon));
        if start >= end {
            bail!("empty evaluation range [{start}, {end}) for a panel of {} rows", panel.len());
        }
        Ok(start..end)
    }
}

/// Parses arguments, merges the config file and runs the command.
pub fn run(cli: Cli) -> Result<String> {
    let settings = match &cli.config {
        Some(path) => cli.settings.over(Settings::from_toml_file(path)?),
        None => cli.settings,
    };
    match cli.command {
        Command::Backtest => cmd_backtest(&settings),
        Command::Compare => cmd_compare(&settings),
        Command::Sweep => cmd_sweep(&settings),
        Command::Trace => cmd_trace(&settings),
        Command::Synth => cmd_synth(&settings),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

fn describe(cfg: &StrategyConfig, range: &Range<usize>) -> String {
    format!(
        "d={} p={} L={} alpha={} lambda={} ({:?} mode) quantile convention: {}\nevaluation rows [{}, {}), {} days\n",
        cfg.horizon,
        cfg.order,
        cfg.formation,
        cfg.alpha,
        cfg.lambda.value,
        cfg.lambda.mode,
        cfg.quantile_convention,
        range.start,
        range.end,
        range.len()
    )
}

fn write_report(dir: &Path, method: Method, report: &BacktestReport, panel: &PricePanel) -> Result<()> {
    backtest::write_decisions_csv(report, create(dir, &format!("decisions_{}.csv", method.slug()))?)?;
    backtest::write_cumulative_csv(report, panel, create(dir, &format!("cumulative_{}.csv", method.slug()))?)?;
    Ok(())
}

pub fn cmd_backtest(settings: &Settings) -> Result<String> {
    let cfg = settings.strategy(Command::Backtest)?;
    let panel = settings.load_panel()?;
    let range = settings.eval_range(&panel, cfg.warmup(), cfg.horizon)?;
    let report = backtest::run_backtest(&panel, &cfg, range.clone(), settings.workers())?;
    let out = settings.out_dir();
    write_report(&out, cfg.method, &report, &panel)?;
    let text = describe(&cfg, &range) + &backtest::metric_table(&[(cfg.method.label().to_string(), &report)])?;
    write_text(&out, &format!("report_{}.txt", cfg.method.slug()), &text)?;
    Ok(text)
}

/// All six methods on one panel; returns the reports in [`Method::ALL`] order.
pub fn compare(settings: &Settings, panel: &PricePanel) -> Result<(StrategyConfig, Range<usize>, Vec<BacktestReport>)> {
    let cfg = settings.strategy(Command::Compare)?;
    let range = settings.eval_range(panel, cfg.warmup(), cfg.horizon)?;
    let reports = Method::ALL
        .iter()
        .map(|m| {
            backtest::run_backtest(panel, &cfg.with_method(*m), range.clone(), settings.workers())
                .with_context(|| format!("method {m}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((cfg, range, reports))
}

pub fn cmd_compare(settings: &Settings) -> Result<String> {
    let panel = settings.load_panel()?;
    let (cfg, range, reports) = compare(settings, &panel)?;
    let out = settings.out_dir();
    for (m, r) in Method::ALL.iter().zip(&reports) {
        write_report(&out, *m, r, &panel)?;
    }
    let rows: Vec<(String, &BacktestReport)> = Method::ALL.iter().map(|m| m.label().to_string()).zip(&reports).collect();
    let text = describe(&cfg, &range) + &backtest::metric_table(&rows)?;
    write_text(&out, "comparison.txt", &text)?;
    Ok(text)
}

/// One line of a sweep CSV; metrics are empty when the value was rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: f64,
    pub status: String,
    pub n_days: usize,
    /// Days on which no trade could be planned.
    pub skipped: usize,
    pub pl_mean: Option<f64>,
    pub pl_se: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub signal_rate: Option<f64>,
    pub control_rate: Option<f64>,
    pub profit_rate: Option<f64>,
    pub max_drawdown: Option<f64>,
}

impl SweepRow {
    fn rejected(axis: SweepAxis, value: f64, reason: String) -> Self {
        Self {
            axis: axis.name().into(),
            value,
            status: format!("rejected: {reason}"),
            n_days: 0,
            skipped: 0,
            pl_mean: None,
            pl_se: None,
            ci_low: None,
            ci_high: None,
            signal_rate: None,
            control_rate: None,
            profit_rate: None,
            max_drawdown: None,
        }
    }

    fn from_report(axis: SweepAxis, value: f64, r: &BacktestReport) -> Self {
        let (lo, hi) = r.confidence_interval_95();
        Self {
            axis: axis.name().into(),
            value,
            status: "ok".into(),
            n_days: r.n_days(),
            skipped: r.decisions.iter().filter(|d| d.diagnostic.is_some()).count(),
            pl_mean: Some(r.pl_mean),
            pl_se: Some(r.pl_se),
            ci_low: Some(lo),
            ci_high: Some(hi),
            signal_rate: Some(r.signal_rate),
            control_rate: Some(r.control_rate),
            profit_rate: Some(r.profit_rate),
            max_drawdown: Some(r.max_drawdown),
        }
    }
}

/// Runs the sweep over a common evaluation range (the latest warmup across
/// the values). Values whose configuration fails, or that cannot plan a
/// trade on any day, are kept as rejected rows.
pub fn sweep(settings: &Settings, panel: &PricePanel) -> Result<(SweepAxis, Vec<SweepRow>)> {
    let axis = settings.sweep_axis.context("sweep needs --sweep-axis")?;
    let values = settings.sweep_values.clone().unwrap_or_else(|| axis.default_values());
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    let mut base = settings.strategy(Command::Sweep)?;
    if settings.method.is_none() {
        base.method = Method::Vmat;
    }
    let configs: Vec<Result<StrategyConfig>> = values
        .iter()
        .map(|v| axis.apply(&base, *v).and_then(|c| c.validate().map(|_| c).map_err(Into::into)))
        .collect();
    let start = configs
        .iter()
        .filter_map(|c| c.as_ref().ok().map(StrategyConfig::warmup))
        .max()
        .unwrap_or(base.warmup());
    let range = settings.eval_range(panel, start, base.horizon)?;
    let rows = values
        .iter()
        .zip(configs)
        .map(|(v, cfg)| {
            let run = cfg.and_then(|c| Ok(backtest::run_backtest(panel, &c, range.clone(), settings.workers())?));
            match run {
                Ok(r) if r.decisions.iter().all(|d| d.diagnostic.is_some()) => {
                    let reason = r.decisions[0].diagnostic.clone().unwrap_or_default();
                    SweepRow::rejected(axis, *v, reason)
                }
                Ok(r) => SweepRow::from_report(axis, *v, &r),
                Err(e) => SweepRow::rejected(axis, *v, format!("{e:#}")),
            }
        })
        .collect();
    Ok((axis, rows))
}

/// Where the mean PL peaks relative to the grid, compared with the typical
/// standard error.
pub fn shape_summary(axis: SweepAxis, rows: &[SweepRow]) -> String {
    let ok: Vec<(usize, f64, f64)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| Some((i, r.pl_mean?, r.pl_se?)))
        .collect();
    if ok.is_empty() {
        return "shape: no accepted values\n".into();
    }
    let (best_i, best, _) = ok.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    let worst = ok.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let mut ses: Vec<f64> = ok.iter().map(|r| r.2).collect();
    ses.sort_by(f64::total_cmp);
    let median_se = ses[ses.len() / 2];
    let position = if best_i == ok[0].0 || best_i == ok[ok.len() - 1].0 {
        "at an end of the grid"
    } else {
        "inside the grid"
    };
    format!(
        "shape: highest mean PL at {} = {} ({position}); spread of means {}% against median se {}%\n",
        axis.name(),
        rows[best_i].value,
        backtest::fmt_sig(100.0 * (best - worst), 4),
        backtest::fmt_sig(100.0 * median_se, 4),
    )
}

pub fn sweep_table(axis: SweepAxis, rows: &[SweepRow]) -> String {
    let pct = |x: Option<f64>| x.map(|v| backtest::fmt_sig(100.0 * v, 4)).unwrap_or_else(|| "-".into());
    let mut out = format!("{:>8}  {:>10}  {:>24}  {}\n", axis.name(), "PL mean", "95% CI", "status");
    for r in rows {
        let ci = match (r.ci_low, r.ci_high) {
            (Some(_), Some(_)) => format!("[{}, {}]", pct(r.ci_low), pct(r.ci_high)),
            _ => "-".into(),
        };
        out.push_str(&format!("{:>8}  {:>10}  {:>24}  {}\n", r.value, pct(r.pl_mean), ci, r.status));
    }
    out
}

pub fn cmd_sweep(settings: &Settings) -> Result<String> {
    let panel = settings.load_panel()?;
    let (axis, rows) = sweep(settings, &panel)?;
    let out = settings.out_dir();
    let mut w = csv::Writer::from_writer(create(&out, &format!("sweep_{}.csv", axis.name()))?);
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    let text = sweep_table(axis, &rows) + &shape_summary(axis, &rows);
    write_text(&out, &format!("sweep_{}.txt", axis.name()), &text)?;
    Ok(text)
}

/// Unit-L2 weights after every full step, per initialization.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub time_index: usize,
    pub paths: Vec<(InitMethod, Vec<Vec<f64>>)>,
}

pub fn trace(settings: &Settings, panel: &PricePanel) -> Result<Trace> {
    let cfg = settings.strategy(Command::Trace)?;
    let t = match settings.at {
        Some(t) => t,
        None => panel
            .len()
            .checked_sub(cfg.horizon + 1)
            .context("panel shorter than the horizon")?,
    };
    let window = panel.log_window(t, cfg.formation)?;
    let obj = TradeoffObjective::new(cfg.lambda.value, window, cfg.order)?;
    let paths = [InitMethod::Coint, InitMethod::MaxVar]
        .into_iter()
        .map(|init| {
            let d = weights::vmat_descent(&obj, init, cfg.n_steps)?;
            let steps = d.weights.provenance.iterates.iter().map(|w| w.iter().copied().collect()).collect();
            Ok((init, steps))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace { time_index: t, paths })
}

pub fn cmd_trace(settings: &Settings) -> Result<String> {
    let panel = settings.load_panel()?;
    let tr = trace(settings, &panel)?;
    let k = panel.n_assets();
    let out = settings.out_dir();
    let mut w = csv::Writer::from_writer(create(&out, "trace.csv")?);
    let mut header = vec!["init".to_string(), "step".to_string()];
    header.extend((1..=k).map(|j| format!("w{j}")));
    w.write_record(&header)?;
    let mut text = format!("trace at row {}\n", tr.time_index);
    for (init, steps) in &tr.paths {
        let name = if *init == InitMethod::Coint { "coint" } else { "maxvar" };
        for (s, wv) in steps.iter().enumerate() {
            let mut rec = vec![name.to_string(), (s + 1).to_string()];
            rec.extend(wv.iter().map(|x| x.to_string()));
            w.write_record(&rec)?;
        }
        if steps.len() >= 2 {
            let delta: f64 = steps[1].iter().zip(&steps[0]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            text.push_str(&format!("{name}: |w(2) - w(1)| = {delta:.3e}\n"));
        }
    }
    w.flush()?;
    let finals: Vec<_> = tr
        .paths
        .iter()
        .filter_map(|(_, s)| s.last().map(|v| nalgebra::DVector::from_column_slice(v)))
        .collect();
    if let [a, b] = finals.as_slice() {
        text.push_str(&format!("angle between final directions: {:.3e}\n", weights::angle_between(a, b)));
    }
    Ok(text)
}

pub fn cmd_synth(settings: &Settings) -> Result<String> {
    let spec = settings.synth_spec();
    let panel = synth::generate(&spec)?;
    let out = settings.out_dir();
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join("panel.csv");
    panel.write_csv(&path)?;
    Ok(format!("wrote {} rows x {} assets to {}\n", panel.len(), panel.n_assets(), path.display()))
}
