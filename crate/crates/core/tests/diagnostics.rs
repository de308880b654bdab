mod common;

use factorlab::dataset::TransformKind;
use factorlab::diagnostics::{
    acf, component_residual, correlation_p_value, externally_studentized, flag_outliers, pearson, pearson_matrix,
    qq_pairs, residual_vs_fitted, tukey_suggest, vif,
};
use factorlab::linmodel::fit_ols;
use factorlab::rng::stream_rng;
use proptest::prelude::*;
use rand::Rng;

use common::{frame_from_rows, frame_with, funnel_data, names, normal, random_problem};

fn white_noise(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| normal(&mut rng)).collect()
}

/// Inverts a small symmetric positive-definite matrix by Gauss-Jordan.
fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        let d = a[col][col];
        a[col].iter_mut().for_each(|v| *v /= d);
        for r in 0..k {
            if r != col {
                let f = a[r][col];
                for c in 0..2 * k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    a.into_iter().map(|r| r[k..].to_vec()).collect()
}

#[test]
fn planted_outlier_is_the_only_flag() {
    let mut rng = stream_rng(11, 0);
    let n = 80;
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
    let mut y: Vec<f64> = x.iter().map(|v| 1.0 + 2.0 * v + normal(&mut rng)).collect();
    y[24] += 12.0;
    let frame = frame_with(vec![("x1".into(), x), ("y".into(), y)]);
    let fit = fit_ols(&frame, &["x1"], "y").unwrap();
    assert_eq!(flag_outliers(&fit, 3.0).unwrap(), vec![25]);
}

#[test]
fn white_noise_acf_stays_inside_band() {
    let out = acf(&white_noise(0, 1000), 20).unwrap();
    assert_eq!(out.lags[0], (0, 1.0));
    assert!(lags_inside(&out) >= 18, "{}/20 inside", lags_inside(&out));
    assert!((out.band - 1.96 / 1000f64.sqrt()).abs() < 1e-3);
}

fn lags_inside(out: &factorlab::diagnostics::Autocorrelation) -> usize {
    out.lags[1..].iter().filter(|(_, r)| r.abs() <= out.band).count()
}

/// With 20 independent lags at the 5% level, P(at least 18 inside) is
/// about 0.925, so any single seed misses now and then.
#[test]
fn white_noise_band_rate_is_calibrated() {
    let seeds = 200;
    let hits = (0..seeds)
        .filter(|&s| lags_inside(&acf(&white_noise(s, 1000), 20).unwrap()) >= 18)
        .count();
    let rate = hits as f64 / seeds as f64;
    assert!((0.85..=0.99).contains(&rate), "rate {rate}");
}

#[test]
fn qq_of_normal_sample_is_near_identity() {
    let sample = white_noise(8, 500);
    let pairs = qq_pairs(&sample);
    let (q, s): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let frame = frame_with(vec![("x1".into(), q), ("y".into(), s)]);
    let slope = fit_ols(&frame, &["x1"], "y").unwrap().beta[1];
    assert!((0.9..=1.1).contains(&slope), "slope {slope}");
}

#[test]
fn funnel_statistic_separates_variance_patterns() {
    let flat = funnel_data(3, 200, false);
    let fit = fit_ols(&flat, &["x1"], "y").unwrap();
    let p = residual_vs_fitted(&fit).funnel.unwrap().p_value;
    assert!(p > 0.05, "homoscedastic p = {p}");

    let fan = funnel_data(3, 200, true);
    let fit = fit_ols(&fan, &["x1"], "y").unwrap();
    let stat = residual_vs_fitted(&fit).funnel.unwrap();
    assert!(stat.p_value < 0.01 && stat.correlation > 0.0, "{stat:?}");
}

#[test]
fn component_residual_shows_curvature() {
    let mut rng = stream_rng(21, 0);
    let n = 200;
    let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let x2: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
    let y: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| a * a + b + 0.3 * normal(&mut rng)).collect();
    let frame = frame_with(vec![("x1".into(), x1), ("x2".into(), x2), ("y".into(), y)]);
    let fit = fit_ols(&frame, &["x1", "x2"], "y").unwrap();
    let pairs = component_residual(&fit, &frame, "x1").unwrap();
    assert!(pairs.windows(2).all(|w| w[0].0 <= w[1].0));

    let u: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let u2: Vec<f64> = u.iter().map(|v| v * v).collect();
    let c: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let quad = frame_with(vec![("x1".into(), u), ("x2".into(), u2), ("y".into(), c)]);
    let qfit = fit_ols(&quad, &["x1", "x2"], "y").unwrap();
    assert!(qfit.beta[2] > 10.0 * qfit.se[2], "{} vs se {}", qfit.beta[2], qfit.se[2]);
}

#[test]
fn ladder_recovers_log_relationship() {
    let mut rng = stream_rng(4, 0);
    let x: Vec<f64> = (0..150).map(|_| rng.random_range(0.1..50.0)).collect();
    let y: Vec<f64> = x.iter().map(|v| 3.0 * v.ln() + 0.1 * normal(&mut rng)).collect();
    let frame = frame_with(vec![("x1".into(), x), ("y".into(), y)]);
    assert_eq!(tukey_suggest(&frame, "x1", "y").unwrap().kind, TransformKind::Log);
}

#[test]
fn vif_equals_inverse_correlation_diagonal() {
    for seed in 0..10 {
        let (mut x, y) = random_problem(seed, 60, 4);
        for row in &mut x {
            row[3] = 0.8 * row[0] + 0.5 * row[3];
        }
        let frame = frame_from_rows(&x, &y);
        let ours = vif(&frame, &names(4)).unwrap();
        let cols: Vec<Vec<f64>> = (0..4).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        let corr: Vec<Vec<f64>> = cols
            .iter()
            .map(|a| cols.iter().map(|b| pearson(a, b).unwrap()).collect())
            .collect();
        let inv = invert(&corr);
        for (j, (_, v)) in ours.iter().enumerate() {
            assert!((v - inv[j][j]).abs() < 1e-9 * inv[j][j], "seed {seed}: {v} vs {}", inv[j][j]);
        }
        // Cross-check against an auxiliary regression.
        let aux = fit_ols(&frame, &["x1", "x2", "x3"], "x4").unwrap();
        assert!((ours["x4"] - 1.0 / (1.0 - aux.r_squared)).abs() < 1e-9 * ours["x4"]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn strict_mask_is_subset_of_loose_mask(seed in any::<u64>()) {
        let (x, y) = random_problem(seed, 30, 4);
        let frame = frame_from_rows(&x, &y);
        let mut cols = names(4);
        cols.push("y".into());
        let m = pearson_matrix(&frame, &cols, 0.05).unwrap();
        let strict = m.mask_at(0.01);
        for i in 0..5 {
            prop_assert!(m.significant[i][i]);
            for j in 0..5 {
                prop_assert!(!strict[i][j] || m.significant[i][j]);
                prop_assert_eq!(m.r[i][j], m.r[j][i]);
                prop_assert!((m.p_values[i][j] - correlation_p_value(m.r[i][j], 30)).abs() < 1e-15 || i == j);
            }
        }
    }

    #[test]
    fn outlier_flags_invariant_to_response_scale(seed in any::<u64>(), c in prop_oneof![0.001f64..0.5, 2.0f64..1000.0]) {
        let (x, mut y) = random_problem(seed, 50, 2);
        y[7] += 8.0;
        let base = fit_ols(&frame_from_rows(&x, &y), &names(2), "y").unwrap();
        let scaled_y: Vec<f64> = y.iter().map(|v| c * v).collect();
        let scaled = fit_ols(&frame_from_rows(&x, &scaled_y), &names(2), "y").unwrap();
        prop_assert_eq!(flag_outliers(&base, 3.0).unwrap(), flag_outliers(&scaled, 3.0).unwrap());
        for (a, b) in externally_studentized(&base).iter().zip(externally_studentized(&scaled)) {
            prop_assert!((a - b).abs() < 1e-8 * a.abs().max(1.0));
        }
    }

    #[test]
    fn acf_bounded(seed in any::<u64>(), n in 5usize..200) {
        let s = white_noise(seed, n);
        let out = acf(&s, n.min(21) - 1).unwrap();
        prop_assert!(out.lags.iter().all(|(_, r)| r.abs() <= 1.0 + 1e-12));
    }
}

