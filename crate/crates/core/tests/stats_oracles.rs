mod common;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use vmat_core::stats;

use common::*;

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn random_symmetric(seed: u64, k: usize) -> DMatrix<f64> {
    let z = normals(&mut rng(seed), k * k);
    let a = DMatrix::from_column_slice(k, k, &z);
    (&a + a.transpose()) * 0.5
}

#[test]
fn ols_matches_normal_equations() {
    for seed in 0..10 {
        let mut r = rng(seed);
        let x = DMatrix::from_column_slice(50, 3, &normals(&mut r, 150));
        let y = DVector::from_vec(normals(&mut r, 50));
        let fit = stats::ols(&x, &y).unwrap();
        let oracle = normal_equations(&rows_of(&x), y.as_slice());
        for (a, b) in fit.coefficients.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn ols_exact_line_and_errors() {
    let x = DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0]);
    let fit = stats::ols(&x, &DVector::from_vec(vec![3.0, 6.0, 9.0])).unwrap();
    assert!((fit.coefficients[0] - 3.0).abs() < 1e-14);
    assert!(fit.residual_variance.abs() < 1e-24);

    let dup = DMatrix::from_fn(6, 2, |i, _| i as f64);
    assert!(matches!(
        stats::ols(&dup, &DVector::zeros(6)),
        Err(vmat_core::Error::RankDeficient)
    ));
    assert!(matches!(
        stats::ols(&DMatrix::identity(2, 2), &DVector::zeros(2)),
        Err(vmat_core::Error::InsufficientData(_))
    ));
}

#[test]
fn top_eigenpair_matches_jacobi() {
    for seed in 0..20 {
        let a = random_symmetric(100 + seed, 6);
        let got = stats::top_eigenpair(&a).unwrap();
        let (val, vec) = jacobi_top(rows_of(&a));
        assert!((got.value - val).abs() < 1e-8, "{} vs {val}", got.value);
        assert!(angle(got.vector.as_slice(), &vec) < 1e-6);
        let sign = if got.vector.dot(&DVector::from_vec(vec.clone())) < 0.0 { -1.0 } else { 1.0 };
        for (a, b) in got.vector.iter().zip(&vec) {
            assert!((a - sign * b).abs() < 1e-6);
        }
    }
}

#[test]
fn top_eigenpair_tie_breaks() {
    let id = stats::top_eigenpair(&DMatrix::identity(3, 3)).unwrap();
    assert_eq!(id.value, 1.0);
    assert_eq!(id.vector.as_slice(), &[1.0, 0.0, 0.0]);
    let d = stats::top_eigenpair(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 5.0, 3.0]))).unwrap();
    assert!((d.value - 5.0).abs() < 1e-14);
    assert!((d.vector[1] - 1.0).abs() < 1e-14);
}

#[test]
fn normal_cdf_against_quadrature() {
    for z in [-6.0, -3.3, -1.959964, -0.7, 0.0, 0.25, 1.0, 1.959964, 2.5, 4.0] {
        let q = normal_cdf_by_quadrature(z);
        assert!((stats::normal_cdf(z) - q).abs() < 1e-8, "z = {z}");
    }
    assert_eq!(stats::normal_cdf(0.0), 0.5);
    assert!((stats::normal_cdf(1.959964) - 0.975).abs() < 1e-6);
}

#[test]
fn normal_quantile_against_bisection() {
    // invert the quadrature cdf by bisection
    let mut lo = 0.0;
    let mut hi = 5.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf_by_quadrature(mid) < 0.975 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = stats::normal_quantile(0.975, 0.0, 1.0).unwrap();
    assert!((z - lo).abs() < 1e-5);
    assert!((z - 1.959964).abs() < 1e-5);
    assert_eq!(stats::normal_quantile(0.5, 2.0, 9.0).unwrap(), 2.0);
    assert!(stats::normal_quantile(1.0, 0.0, 1.0).is_err());
    assert!(stats::normal_quantile(0.3, 0.0, 0.0).is_err());
}

#[test]
fn chi2_sf_against_quadrature() {
    for dof in [1usize, 2, 3, 5, 10, 20] {
        for x in [0.5, 1.0, 3.0, 7.5, 18.307, 30.0] {
            let q = chi2_sf_by_quadrature(x, dof);
            let got = stats::chi2_sf(x, dof).unwrap();
            assert!((got - q).abs() < 1e-6, "dof {dof} x {x}: {got} vs {q}");
        }
    }
    assert_eq!(stats::chi2_sf(0.0, 4).unwrap(), 1.0);
    assert!((stats::chi2_sf(2.0 * 2f64.ln(), 2).unwrap() - 0.5).abs() < 1e-14);
    assert!((stats::chi2_sf(18.307, 10).unwrap() - 0.05).abs() < 1e-3);
    assert!(stats::chi2_sf(1.0, 0).is_err());
}

#[test]
fn ljung_box_examples() {
    let alt: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let lb = stats::ljung_box(&alt, 1, 0).unwrap();
    let rho = stats::autocorrelations(&alt, 1).unwrap()[0];
    assert!((rho + 0.99).abs() < 1e-12);
    assert!((lb.statistic - 100.0 * 102.0 * rho * rho / 99.0).abs() < 1e-9);
    assert!(lb.p_value < 1e-20);

    let noise = normals(&mut rng(2024), 500);
    let lb = stats::ljung_box(&noise, 10, 0).unwrap();
    assert!(lb.p_value > 1e-4, "p = {}", lb.p_value);
    assert_eq!(lb.dof, 10);

    assert!(matches!(
        stats::ljung_box(&[3.0; 40], 5, 0),
        Err(vmat_core::Error::DegenerateSeries)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ols_duplicated_row_equals_weight_two(seed in 0u64..10_000, dup in 0usize..30) {
        let mut r = rng(seed);
        let x = DMatrix::from_column_slice(30, 3, &normals(&mut r, 90));
        let y = normals(&mut r, 30);
        let mut rows = rows_of(&x);
        let mut ys = y.clone();
        rows.push(rows[dup].clone());
        ys.push(y[dup]);
        let xd = DMatrix::from_fn(31, 3, |i, j| rows[i][j]);
        let fit = stats::ols(&xd, &DVector::from_vec(ys)).unwrap();
        let mut w = vec![1.0; 30];
        w[dup] = 2.0;
        let oracle = weighted_normal_equations(&rows[..30], &y, &w);
        for (a, b) in fit.coefficients.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn eigen_scaling(seed in 0u64..10_000, c in 0.01f64..100.0) {
        let a = random_symmetric(seed, 5);
        let base = stats::top_eigenpair(&a).unwrap();
        let scaled = stats::top_eigenpair(&(&a * c)).unwrap();
        prop_assert!((scaled.value - c * base.value).abs() < 1e-9 * c.max(1.0) * base.value.abs().max(1.0));
        prop_assert!((&scaled.vector - &base.vector).norm() < 1e-9);
    }

    #[test]
    fn rayleigh_bound(seed in 0u64..10_000) {
        let a = random_symmetric(seed, 4);
        let top = stats::top_eigenpair(&a).unwrap();
        let mut r = rng(seed ^ 0xabcdef);
        for _ in 0..20 {
            let v = DVector::from_vec(normals(&mut r, 4));
            let q = v.dot(&(&a * &v)) / v.norm_squared();
            prop_assert!(q <= top.value + 1e-8);
        }
    }

    #[test]
    fn ljung_box_ignores_a_constant_shift(seed in 0u64..10_000, shift in -50.0f64..50.0) {
        let e = normals(&mut rng(seed), 120);
        let shifted: Vec<f64> = e.iter().map(|x| x + shift).collect();
        let a = stats::ljung_box(&e, 8, 2).unwrap();
        let b = stats::ljung_box(&shifted, 8, 2).unwrap();
        prop_assert!((a.statistic - b.statistic).abs() < 1e-9 * a.statistic.max(1.0));
    }
}

#[test]
fn normal_cdf_monotone_on_grid() {
    let grid: Vec<f64> = (0..10_000).map(|i| -8.0 + 16.0 * i as f64 / 9_999.0).collect();
    assert!(grid.windows(2).all(|w| stats::normal_cdf(w[0]) <= stats::normal_cdf(w[1])));
}
