//! Choosing λ at a trading time.
//!
//! Two procedures: cross-validation over recent (already settled) trades, and
//! a backward search that starts from the largest λ and stops at the first
//! one whose AR residuals pass a Ljung-Box whiteness test.

use serde::{Deserialize, Serialize};

use crate::backtest::{self, LambdaMode, Method, StrategyConfig};
use crate::error::{Error, Result};
use crate::market_data::PricePanel;
use crate::stats;
use crate::weights::{self, InitMethod, TradeoffObjective};

/// The sensitivity-study λ list.
pub const DEFAULT_GRID: [f64; 8] = [1.0, 3.0, 5.0, 7.0, 10.0, 13.0, 20.0, 30.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LambdaGrid {
    values: Vec<f64>,
}

impl LambdaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("lambda grid is empty"));
        }
        if values.iter().any(|v| !(*v >= 1.0) || !v.is_finite()) {
            return Err(Error::invalid("lambda grid values must be finite and >= 1"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("lambda grid must be strictly ascending"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Default for LambdaGrid {
    fn default() -> Self {
        Self {
            values: DEFAULT_GRID.to_vec(),
        }
    }
}

impl TryFrom<Vec<f64>> for LambdaGrid {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<LambdaGrid> for Vec<f64> {
    fn from(g: LambdaGrid) -> Self {
        g.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMethod {
    Cv,
    Tame,
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateDiagnostic {
    pub lambda: f64,
    /// Mean realized PL (CV) or Ljung-Box p-value (Tame).
    pub score: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    pub chosen_lambda: f64,
    pub method: SelectionMethod,
    pub diagnostics: Vec<CandidateDiagnostic>,
    /// Tame only: no candidate passed and the smallest λ was used.
    pub none_adequate: bool,
}

/// Picks the λ with the highest mean PL over the `lookback` most recent
/// trades that settled strictly before `t`, i.e. entries at
/// `t - d - lookback .. t - d`. Ties go to the smallest λ.
pub fn select_cv(
    panel: &PricePanel,
    t: usize,
    grid: &LambdaGrid,
    lookback: usize,
    cfg: &StrategyConfig,
) -> Result<SelectionOutcome> {
    if grid.len() == 1 {
        return Ok(SelectionOutcome {
            chosen_lambda: grid.values()[0],
            method: SelectionMethod::Cv,
            diagnostics: vec![],
            none_adequate: false,
        });
    }
    if lookback == 0 {
        return Err(Error::invalid("cv lookback must be >= 1"));
    }
    let needed = cfg.first_tradable() + cfg.horizon + lookback;
    if t < needed {
        return Err(Error::InsufficientHistory { t, needed });
    }
    let first = t - cfg.horizon - lookback;
    let last = t - cfg.horizon;

    let mut sim = cfg.with_method(Method::Vmat);
    sim.lambda.mode = LambdaMode::Fixed;

    let mut diagnostics = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64)> = None;
    for &lambda in grid.values() {
        sim.lambda.value = lambda;
        let mut total = 0.0;
        for s in first..last {
            total += backtest::run_trade(panel, s, &sim)?.pl;
        }
        let score = total / lookback as f64;
        diagnostics.push(CandidateDiagnostic {
            lambda,
            score: Some(score),
            note: None,
        });
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((lambda, score));
        }
    }
    Ok(SelectionOutcome {
        chosen_lambda: best.expect("nonempty grid").0,
        method: SelectionMethod::Cv,
        diagnostics,
        none_adequate: false,
    })
}

/// Walks the grid from the largest λ down and returns the first whose final
/// AR residuals do not reject whiteness at `significance`.
pub fn select_tame<F>(
    mut obj_factory: F,
    grid: &LambdaGrid,
    init: InitMethod,
    n_steps: usize,
    lb_lag: usize,
    significance: f64,
) -> Result<SelectionOutcome>
where
    F: FnMut(f64) -> Result<TradeoffObjective>,
{
    let mut diagnostics = Vec::new();
    for &lambda in grid.values().iter().rev() {
        let tested = obj_factory(lambda).and_then(|obj| {
            let descent = weights::vmat_descent(&obj, init, n_steps)?;
            let resid = &descent.fit.residuals;
            let lag = lb_lag.min(resid.len().saturating_sub(1));
            stats::ljung_box(resid, lag, obj.order())
        });
        match tested {
            Ok(lb) => {
                diagnostics.push(CandidateDiagnostic {
                    lambda,
                    score: Some(lb.p_value),
                    note: None,
                });
                if lb.p_value > significance {
                    return Ok(SelectionOutcome {
                        chosen_lambda: lambda,
                        method: SelectionMethod::Tame,
                        diagnostics,
                        none_adequate: false,
                    });
                }
            }
            Err(e) => diagnostics.push(CandidateDiagnostic {
                lambda,
                score: None,
                note: Some(e.to_string()),
            }),
        }
    }
    Ok(SelectionOutcome {
        chosen_lambda: grid.values()[0],
        method: SelectionMethod::Tame,
        diagnostics,
        none_adequate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn grid_validation() {
        assert_eq!(LambdaGrid::default().values(), &DEFAULT_GRID);
        assert!(LambdaGrid::new(vec![]).is_err());
        assert!(LambdaGrid::new(vec![0.5, 2.0]).is_err());
        assert!(LambdaGrid::new(vec![3.0, 2.0]).is_err());
        assert!(LambdaGrid::new(vec![2.0, 2.0]).is_err());
    }

    #[test]
    fn tame_falls_back_to_smallest_when_every_candidate_errors() {
        let grid = LambdaGrid::new(vec![1.0, 4.0, 9.0]).unwrap();
        let mut seen = Vec::new();
        let out = select_tame(
            |l| {
                seen.push(l);
                Err(Error::DegenerateSeries)
            },
            &grid,
            InitMethod::MaxVar,
            1,
            4,
            0.05,
        )
        .unwrap();
        assert_eq!(seen, vec![9.0, 4.0, 1.0]);
        assert_eq!(out.chosen_lambda, 1.0);
        assert!(out.none_adequate);
        assert!(out.diagnostics.iter().all(|d| d.note.is_some()));
    }

    #[test]
    fn tame_rejecting_everything_returns_smallest() {
        // a smooth deterministic window leaves strongly autocorrelated AR residuals
        let win = DMatrix::from_fn(61, 2, |i, j| {
            let t = i as f64;
            4.0 + 0.3 * (t * 0.05 * (j + 1) as f64).sin() + 0.001 * t * t
        });
        let grid = LambdaGrid::new(vec![1.0, 2.0]).unwrap();
        let out = select_tame(
            |l| TradeoffObjective::new(l, win.clone(), 2),
            &grid,
            InitMethod::MaxVar,
            1,
            10,
            0.999_999,
        )
        .unwrap();
        assert_eq!(out.chosen_lambda, 1.0);
        assert!(out.none_adequate);
        assert_eq!(out.diagnostics.len(), 2);
    }
}
