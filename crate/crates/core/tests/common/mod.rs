//! Reference implementations used only by tests. Nothing here calls into the
//! crate's numerical routines.

#![allow(dead_code, clippy::needless_range_loop, clippy::too_many_arguments, clippy::manual_is_multiple_of)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Least squares through `(XᵀWX) β = XᵀWy`; rows are given as slices.
pub fn weighted_normal_equations(rows: &[Vec<f64>], y: &[f64], weights: &[f64]) -> Vec<f64> {
    let m = rows[0].len();
    let mut xtx = vec![vec![0.0; m]; m];
    let mut xty = vec![0.0; m];
    for ((r, yi), wi) in rows.iter().zip(y).zip(weights) {
        for a in 0..m {
            xty[a] += wi * r[a] * yi;
            for b in 0..m {
                xtx[a][b] += wi * r[a] * r[b];
            }
        }
    }
    gauss_solve(xtx, xty)
}

pub fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    weighted_normal_equations(rows, y, &vec![1.0; y.len()])
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues and eigenvectors (as columns, `vecs[i][j]` is component `i`
/// of vector `j`).
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Largest eigenvalue and its unit eigenvector from [`jacobi_eigen`].
pub fn jacobi_top(a: Vec<Vec<f64>>) -> (f64, Vec<f64>) {
    let (vals, vecs) = jacobi_eigen(a);
    let j = (0..vals.len()).max_by(|&x, &y| vals[x].total_cmp(&vals[y])).unwrap();
    (vals[j], vecs.iter().map(|row| row[j]).collect())
}

/// Adaptive Simpson quadrature.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, eps, 50)
}

pub fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `Φ(z)` as `1/2 ± ∫_0^{|z|} φ`.
pub fn normal_cdf_by_quadrature(z: f64) -> f64 {
    let half = simpson(&normal_density, 0.0, z.abs(), 1e-14);
    if z >= 0.0 { 0.5 + half } else { 0.5 - half }
}

/// `Γ(k/2)` for a positive integer `k`, from the factorial identities.
pub fn gamma_half_integer(k: usize) -> f64 {
    if k % 2 == 0 {
        (1..k / 2).map(|i| i as f64).product()
    } else {
        // Γ(n + 1/2) = (2n)! √π / (4ⁿ n!)
        let n = (k - 1) / 2;
        let mut g = std::f64::consts::PI.sqrt();
        for i in 0..n {
            g *= i as f64 + 0.5;
        }
        g
    }
}

pub fn chi2_density(x: f64, dof: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let k = dof as f64;
    (x.powf(k / 2.0 - 1.0) * (-x / 2.0).exp()) / (2f64.powf(k / 2.0) * gamma_half_integer(dof))
}

/// `P(X > x)` by integrating the density over `[x, x + 400]` in unit panels.
pub fn chi2_sf_by_quadrature(x: f64, dof: usize) -> f64 {
    let f = |t: f64| chi2_density(t, dof);
    let mut total = 0.0;
    let mut a = x;
    while a < x + 400.0 {
        total += simpson(&f, a, a + 1.0, 1e-15);
        a += 1.0;
    }
    total
}

/// Simulates `y_t = Σ β_j y_{t-j} + σ ε_t` from zero initial lags and
/// returns the sample standard deviation of `y_h` for `h = 1..=horizon`.
pub fn monte_carlo_forecast_sd(beta: &[f64], sigma: f64, horizon: usize, paths: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed);
    let p = beta.len();
    let mut sum = vec![0.0; horizon];
    let mut sum_sq = vec![0.0; horizon];
    let mut hist = vec![0.0; p + horizon];
    for _ in 0..paths {
        hist.iter_mut().for_each(|h| *h = 0.0);
        for h in 0..horizon {
            let e: f64 = rng.sample(StandardNormal);
            let idx = p + h;
            let v: f64 = beta.iter().enumerate().map(|(j, b)| b * hist[idx - 1 - j]).sum::<f64>() + sigma * e;
            hist[idx] = v;
            sum[h] += v;
            sum_sq[h] += v * v;
        }
    }
    let n = paths as f64;
    (0..horizon)
        .map(|h| ((sum_sq[h] - sum[h] * sum[h] / n) / (n - 1.0)).sqrt())
        .collect()
}

/// Simulates a stationary-start AR(p) series of length `n` after a burn-in.
pub fn simulate_ar(beta: &[f64], sigma: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed);
    let p = beta.len();
    let burn = 500;
    let mut y = vec![0.0; p];
    for _ in 0..burn + n {
        let e: f64 = rng.sample(StandardNormal);
        let len = y.len();
        let v: f64 = beta.iter().enumerate().map(|(j, b)| b * y[len - 1 - j]).sum::<f64>() + sigma * e;
        y.push(v);
    }
    y.split_off(p + burn)
}

/// `J(w, β)` by a naive double loop over the rows that have `p` lags.
pub fn objective_by_loops(window: &[Vec<f64>], w: &[f64], beta: &[f64], lambda: f64) -> f64 {
    let p = beta.len();
    let n = window.len();
    let k = w.len();
    let mut mean = vec![0.0; k];
    for row in &window[p..] {
        for j in 0..k {
            mean[j] += row[j] / (n - p) as f64;
        }
    }
    let proj = |i: usize| -> f64 { (0..k).map(|j| w[j] * (window[i][j] - mean[j])).sum() };
    let mut vol = 0.0;
    let mut sse = 0.0;
    for i in p..n {
        let c = proj(i);
        let mut pred = 0.0;
        for (j, b) in beta.iter().enumerate() {
            pred += b * proj(i - 1 - j);
        }
        vol += c * c;
        sse += (c - pred) * (c - pred);
    }
    lambda * vol - sse
}

/// Sign-insensitive angle between two vectors.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    let d = dot.abs().min(1.0);
    // chord form, accurate near zero
    let chord = (2.0 - 2.0 * d).max(0.0).sqrt();
    2.0 * (chord / 2.0).asin()
}

/// Two-sample Welch t statistic for `mean(a) - mean(b)`.
pub fn welch_t(a: &[f64], b: &[f64]) -> f64 {
    let stats = |x: &[f64]| {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v / n)
    };
    let (ma, va) = stats(a);
    let (mb, vb) = stats(b);
    (ma - mb) / (va + vb).sqrt()
}

/// Portfolio values of the ten-day fixture plus two settlement days: longs
/// at t=2 and t=6 that gain 0.01 the next day, and a short at t=9 that loses
/// 0.02 by the horizon (d = 2). Band: long below -0.595, short above 0.595.
pub const FIXTURE_Y: [f64; 12] = [0.0, 0.0, -0.60, -0.59, 0.0, 0.0, -0.60, -0.59, 0.0, 0.60, 0.605, 0.62];
pub const FIXTURE_BAND: (f64, f64) = (-0.595, 0.595);

/// Two assets whose log prices both equal the fixture value, so that
/// w = (0.5, 0.5) reproduces it.
pub fn fixture_panel() -> vmat_core::market_data::PricePanel {
    let start = chrono::NaiveDate::from_ymd_opt(2016, 1, 4).unwrap();
    let dates = (0..FIXTURE_Y.len()).map(|i| start + chrono::Days::new(i as u64)).collect();
    let prices = nalgebra::DMatrix::from_fn(FIXTURE_Y.len(), 2, |i, _| FIXTURE_Y[i].exp());
    vmat_core::market_data::PricePanel::new(dates, vec!["A".into(), "B".into()], prices).unwrap()
}
