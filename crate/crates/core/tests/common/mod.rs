#![allow(dead_code)]

use factorlab::dataset::FactorFrame;
use factorlab::rng::{stream_rng, StreamRng};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn normal(rng: &mut StreamRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Frame with bookkeeping term/panel columns plus the given columns; the
/// response is "y".
pub fn frame_with(cols: Vec<(String, Vec<f64>)>) -> FactorFrame {
    let n = cols[0].1.len();
    let mut all = vec![
        ("term".to_string(), (1..=n).map(|i| i as f64).collect()),
        ("panel".to_string(), vec![1.0; n]),
    ];
    all.extend(cols);
    FactorFrame::from_columns(all, "y", "term", "panel").unwrap()
}

pub fn names(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("x{j}")).collect()
}

/// Columns x1..xp plus y from a row-major predictor table.
pub fn frame_from_rows(x: &[Vec<f64>], y: &[f64]) -> FactorFrame {
    let p = x[0].len();
    let mut cols: Vec<(String, Vec<f64>)> = names(p)
        .into_iter()
        .enumerate()
        .map(|(j, name)| (name, x.iter().map(|row| row[j]).collect()))
        .collect();
    cols.push(("y".into(), y.to_vec()));
    frame_with(cols)
}

/// Random regression problem: predictors N(0, s_j²) with per-column scale,
/// y = Xβ + noise.
pub fn random_problem(seed: u64, n: usize, p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = stream_rng(seed, 0);
    let scales: Vec<f64> = (0..p).map(|_| rng.random_range(0.5..5.0)).collect();
    let beta: Vec<f64> = (0..=p).map(|_| rng.random_range(-3.0..3.0)).collect();
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| scales.iter().map(|s| s * normal(&mut rng)).collect())
        .collect();
    let y = x
        .iter()
        .map(|row| beta[0] + row.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>() + normal(&mut rng))
        .collect();
    (x, y)
}

/// Least squares through the normal equations XᵀXβ = Xᵀy (intercept
/// prepended), solved by Gaussian elimination with partial pivoting.
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = x[0].len() + 1;
    let row = |i: usize| -> Vec<f64> {
        let mut r = vec![1.0];
        r.extend_from_slice(&x[i]);
        r
    };
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..x.len() {
        let r = row(i);
        for p in 0..k {
            for q in 0..k {
                a[p][q] += r[p] * r[q];
            }
            a[p][k] += r[p] * y[i];
        }
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            for c in col..=k {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut beta = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| a[r][c] * beta[c]).sum();
        beta[r] = (a[r][k] - s) / a[r][r];
    }
    beta
}

/// Four U(0, 1) features; y = 10·x1·x2 + 5·[x3 > 0.5] − 4·x4·[x1 < 0.3] +
/// N(0, 0.5²).
pub fn interaction_threshold(seed: u64, n: usize) -> FactorFrame {
    let mut rng = stream_rng(seed, 0);
    let x: Vec<Vec<f64>> = (0..n).map(|_| (0..4).map(|_| rng.random::<f64>()).collect()).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|r| {
            10.0 * r[0] * r[1] + if r[2] > 0.5 { 5.0 } else { 0.0 } - if r[0] < 0.3 { 4.0 * r[3] } else { 0.0 }
                + 0.5 * normal(&mut rng)
        })
        .collect();
    frame_from_rows(&x, &y)
}

/// y = 2 + 3x + N(0, σ²) with x ~ U(1, 10); σ = 0.3·(2 + 3x) when
/// `funnel`, otherwise 3.
pub fn funnel_data(seed: u64, n: usize, funnel: bool) -> FactorFrame {
    let mut rng = stream_rng(seed, 0);
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..10.0)).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|v| {
            let mu = 2.0 + 3.0 * v;
            let sd = if funnel { 0.3 * mu } else { 3.0 };
            mu + sd * normal(&mut rng)
        })
        .collect();
    frame_with(vec![("x1".into(), x), ("y".into(), y)])
}

/// AR(1) series with unit innovations, started from the stationary law.
pub fn ar1(seed: u64, n: usize, phi: f64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    let mut v = normal(&mut rng) / (1.0 - phi * phi).sqrt();
    (0..n)
        .map(|_| {
            let out = v;
            v = phi * v + normal(&mut rng);
            out
        })
        .collect()
}
