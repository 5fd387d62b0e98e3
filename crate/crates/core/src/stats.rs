//! Statistics and small dense linear-algebra kernel.
//!
//! Least squares goes through an SVD (never the normal equations), the top
//! eigenpair through a full symmetric decomposition; asset counts are small
//! so both are cheap. Distribution functions are thin wrappers over `statrs`
//! special functions.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use statrs::function::{erf, gamma};

use crate::error::{Error, Result};

/// Singular values below this fraction of the largest mark a design as
/// rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Relative gap under which two eigenvalues are treated as tied.
const EIGEN_TIE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: DVector<f64>,
    pub residuals: DVector<f64>,
    /// Residual sum of squares over `n - m` degrees of freedom.
    pub residual_variance: f64,
}

impl OlsFit {
    pub fn rss(&self) -> f64 {
        self.residuals.norm_squared()
    }
}

/// Ordinary least squares of `response` on the columns of `design`.
pub fn ols(design: &DMatrix<f64>, response: &DVector<f64>) -> Result<OlsFit> {
    let (n, m) = design.shape();
    if response.len() != n {
        return Err(Error::invalid(format!(
            "design has {n} rows but response has {}",
            response.len()
        )));
    }
    if n <= m || m == 0 {
        return Err(Error::InsufficientData(format!("{n} rows for {m} regressors")));
    }
    if design.iter().chain(response.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("ols input".into()));
    }

    let svd = design.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    if !(s_max > 0.0) || s_min <= RANK_TOLERANCE * s_max {
        return Err(Error::RankDeficient);
    }
    let coefficients = svd
        .solve(response, RANK_TOLERANCE * s_max)
        .map_err(|_| Error::RankDeficient)?;
    let residuals = response - design * &coefficients;
    let residual_variance = residuals.norm_squared() / (n - m) as f64;
    Ok(OlsFit {
        coefficients,
        residuals,
        residual_variance,
    })
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// Unit L2; the largest-magnitude component is positive.
    pub vector: DVector<f64>,
}

/// Algebraically largest eigenvalue of a symmetric matrix and its eigenvector.
///
/// The input is symmetrized as `(K + Kᵀ)/2`. When the top eigenvalue is
/// repeated, the candidate whose dominant component has the lowest index is
/// returned, so the identity yields `e₁`.
pub fn top_eigenpair(matrix: &DMatrix<f64>) -> Result<EigenPair> {
    let k = matrix.nrows();
    if k == 0 || matrix.ncols() != k {
        return Err(Error::invalid(format!("matrix is {:?}, expected square", matrix.shape())));
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigen input".into()));
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let top = eig.eigenvalues.max();
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);

    let mut best: Option<(usize, DVector<f64>)> = None;
    for (i, &value) in eig.eigenvalues.iter().enumerate() {
        if top - value > EIGEN_TIE * scale {
            continue;
        }
        let v = orient(eig.eigenvectors.column(i).into_owned());
        let lead = dominant_index(&v);
        if best.as_ref().is_none_or(|(b, _)| lead < *b) {
            best = Some((lead, v));
        }
    }
    let (_, vector) = best.expect("nonempty spectrum");
    Ok(EigenPair { value: top, vector })
}

/// Index of the largest-magnitude component; near-ties go to the lowest index.
fn dominant_index(v: &DVector<f64>) -> usize {
    let max = v.amax();
    v.iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-12))
        .unwrap_or(0)
}

/// Normalizes to unit L2 and flips so the dominant component is positive.
pub fn orient(mut v: DVector<f64>) -> DVector<f64> {
    let norm = v.norm();
    if norm > 0.0 {
        v /= norm;
    }
    if v[dominant_index(&v)] < 0.0 {
        v.neg_mut();
    }
    v
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// The `p`-quantile of `Normal(mean, variance)`.
pub fn normal_quantile(p: f64, mean: f64, variance: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("quantile level {p} outside (0,1)")));
    }
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::invalid(format!("variance {variance} must be positive")));
    }
    let z = -std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p);
    Ok(mean + variance.sqrt() * z)
}

/// Chi-square survival function `P(X > x)` with `dof` degrees of freedom.
pub fn chi2_sf(x: f64, dof: usize) -> Result<f64> {
    if dof < 1 {
        return Err(Error::invalid("chi-square needs dof >= 1"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::invalid(format!("chi-square argument {x} must be >= 0")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma::gamma_ur(dof as f64 / 2.0, x / 2.0))
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (`n - 1` denominator).
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Sample autocorrelations at lags `1..=max_lag` of the mean-centered series.
pub fn autocorrelations(xs: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let m = mean(xs);
    let centered: Vec<f64> = xs.iter().map(|x| x - m).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    let scale = xs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if !(denom > (xs.len() as f64) * (1e-13 * scale).powi(2)) {
        return Err(Error::DegenerateSeries);
    }
    Ok((1..=max_lag)
        .map(|lag| {
            centered
                .iter()
                .zip(&centered[lag..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / denom
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBox {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
}

/// Ljung-Box portmanteau test with `max_lag - fitted_params` degrees of freedom.
pub fn ljung_box(residuals: &[f64], max_lag: usize, fitted_params: usize) -> Result<LjungBox> {
    let n = residuals.len();
    if max_lag < 1 || n <= max_lag {
        return Err(Error::InsufficientData(format!(
            "ljung-box needs n > h >= 1 (n = {n}, h = {max_lag})"
        )));
    }
    if max_lag <= fitted_params {
        return Err(Error::invalid(format!(
            "ljung-box lag {max_lag} must exceed fitted parameters {fitted_params}"
        )));
    }
    let rho = autocorrelations(residuals, max_lag)?;
    let nf = n as f64;
    let statistic = nf
        * (nf + 2.0)
        * rho
            .iter()
            .enumerate()
            .map(|(j, r)| r * r / (nf - (j + 1) as f64))
            .sum::<f64>();
    let dof = max_lag - fitted_params;
    Ok(LjungBox {
        statistic,
        p_value: chi2_sf(statistic, dof)?,
        dof,
    })
}
