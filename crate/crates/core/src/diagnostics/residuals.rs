//! Residual-based diagnostics: studentized residuals and outlier flags,
//! normal Q-Q pairs, the residual-vs-fitted scatter with a funnel
//! statistic, and component-plus-residual series.

use serde::{Deserialize, Serialize};

use super::correlation::{correlation_p_value, pearson};
use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::linmodel::LinearFit;
use crate::numkernel::normal_quantile;

pub const DEFAULT_OUTLIER_THRESHOLD: f64 = 3.0;

/// Residuals treated as exactly zero when RSS is this small relative to TSS.
const NEGLIGIBLE_RSS: f64 = 1e-24;
const LEVERAGE_CEILING: f64 = 1.0 - 1e-12;

fn negligible_residuals(fit: &LinearFit) -> bool {
    fit.rss <= NEGLIGIBLE_RSS * fit.tss || fit.rss == 0.0
}

/// eᵢ / (rse·√(1 − hᵢᵢ)).
pub fn internally_standardized(fit: &LinearFit) -> Vec<f64> {
    if negligible_residuals(fit) {
        return vec![0.0; fit.nobs()];
    }
    fit.residuals
        .iter()
        .zip(&fit.leverage)
        .map(|(e, h)| {
            if *h >= LEVERAGE_CEILING {
                0.0
            } else {
                e / (fit.rse * (1.0 - h).sqrt())
            }
        })
        .collect()
}

/// Leave-one-out studentized residuals, tᵢ = rᵢ·√((ν − 1)/(ν − rᵢ²)) with
/// ν the residual degrees of freedom.
pub fn externally_studentized(fit: &LinearFit) -> Vec<f64> {
    let nu = fit.df_resid as f64;
    internally_standardized(fit)
        .into_iter()
        .map(|r| {
            let denom = nu - r * r;
            if r == 0.0 {
                0.0
            } else if denom <= 0.0 {
                r.signum() * f64::INFINITY
            } else {
                r * ((nu - 1.0) / denom).sqrt()
            }
        })
        .collect()
}

/// 1-based indices of rows with |externally studentized residual| above
/// `threshold`, ascending.
pub fn flag_outliers(fit: &LinearFit, threshold: f64) -> Result<Vec<usize>> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::ConfigInvalid(format!("outlier threshold must be positive, got {threshold}")));
    }
    if fit.df_resid < 2 {
        return Err(Error::InsufficientRows {
            rows: fit.nobs(),
            required: fit.nobs() + 2 - fit.df_resid,
        });
    }
    Ok(externally_studentized(fit)
        .iter()
        .enumerate()
        .filter(|(_, t)| t.abs() > threshold)
        .map(|(i, _)| i + 1)
        .collect())
}

/// Sorted sample against normal quantiles at plotting positions (i − ½)/n.
pub fn qq_pairs(values: &[f64]) -> Vec<(f64, f64)> {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let p = (i as f64 + 0.5) / n as f64;
            (normal_quantile(p).expect("plotting position lies in (0, 1)"), s)
        })
        .collect()
}

/// Q-Q pairs of the internally standardized residuals.
pub fn qq_points(fit: &LinearFit) -> Vec<(f64, f64)> {
    qq_pairs(&internally_standardized(fit))
}

/// Correlation between |residual| and fitted value, with its two-sided
/// t-test p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunnelStatistic {
    pub correlation: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualFitted {
    /// (fitted, residual) in row order.
    pub points: Vec<(f64, f64)>,
    /// Absent below 10 observations.
    pub funnel: Option<FunnelStatistic>,
}

pub const FUNNEL_MIN_OBS: usize = 10;

pub fn residual_vs_fitted(fit: &LinearFit) -> ResidualFitted {
    let points: Vec<(f64, f64)> = fit.fitted.iter().copied().zip(fit.residuals.iter().copied()).collect();
    let n = points.len();
    let funnel = (n >= FUNNEL_MIN_OBS).then(|| {
        if negligible_residuals(fit) {
            return FunnelStatistic {
                correlation: 0.0,
                p_value: 1.0,
            };
        }
        let abs_res: Vec<f64> = fit.residuals.iter().map(|e| e.abs()).collect();
        match pearson(&abs_res, &fit.fitted) {
            Some(r) => FunnelStatistic {
                correlation: r,
                p_value: correlation_p_value(r, n),
            },
            None => FunnelStatistic {
                correlation: 0.0,
                p_value: 1.0,
            },
        }
    });
    ResidualFitted { points, funnel }
}

/// (xᵢⱼ, eᵢ + βⱼ·xᵢⱼ) pairs sorted by x.
pub fn component_residual(fit: &LinearFit, frame: &FactorFrame, predictor: &str) -> Result<Vec<(f64, f64)>> {
    let j = fit
        .coefficient_index(predictor)
        .ok_or_else(|| Error::UnknownColumn(predictor.to_lowercase()))?;
    let x = frame.column(predictor)?;
    if x.len() != fit.nobs() {
        return Err(Error::DimensionMismatch {
            expected: fit.nobs(),
            found: x.len(),
        });
    }
    let beta = fit.beta[j];
    let mut pairs: Vec<(f64, f64)> = x.iter().zip(&fit.residuals).map(|(&xi, &e)| (xi, e + beta * xi)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linmodel::fit_ols;

    fn frame(cols: Vec<(&str, Vec<f64>)>) -> FactorFrame {
        let n = cols[0].1.len();
        let mut all: Vec<(String, Vec<f64>)> = vec![
            ("term".into(), (1..=n).map(|i| i as f64).collect()),
            ("panel".into(), vec![1.0; n]),
        ];
        all.extend(cols.into_iter().map(|(k, v)| (k.to_string(), v)));
        FactorFrame::from_columns(all, "price", "term", "panel").unwrap()
    }

    #[test]
    fn symmetric_design_flags_nothing() {
        let f = frame(vec![("x", vec![0.0, 0.0, 1.0, 1.0]), ("price", vec![0.0, 2.0, 0.0, 2.0])]);
        let fit = fit_ols(&f, &["x"], "price").unwrap();
        assert!(fit.residuals.iter().all(|e| (e.abs() - 1.0).abs() < 1e-12));
        assert!(flag_outliers(&fit, 3.0).unwrap().is_empty());
        assert!(flag_outliers(&fit, f64::INFINITY).unwrap().is_empty());
    }

    #[test]
    fn studentized_matches_leave_one_out_refit() {
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let y = vec![1.1, 2.3, 2.8, 4.2, 4.9, 9.0, 7.1, 7.8];
        let f = frame(vec![("x", x.clone()), ("price", y.clone())]);
        let fit = fit_ols(&f, &["x"], "price").unwrap();
        let t = externally_studentized(&fit);
        // row 5 held out: refit and compare the deleted residual scaled by
        // its standard error
        let i = 5;
        let keep: Vec<usize> = (0..8).filter(|&k| k != i).collect();
        let loo = fit_ols(&f.take_rows(&keep).unwrap(), &["x"], "price").unwrap();
        let pred = loo.beta[0] + loo.beta[1] * x[i];
        let xbar = keep.iter().map(|&k| x[k]).sum::<f64>() / 7.0;
        let sxx: f64 = keep.iter().map(|&k| (x[k] - xbar).powi(2)).sum();
        let var_pred = loo.rse.powi(2) * (1.0 + 1.0 / 7.0 + (x[i] - xbar).powi(2) / sxx);
        let expected = (y[i] - pred) / var_pred.sqrt();
        assert!((t[i] - expected).abs() < 1e-10, "{} vs {}", t[i], expected);
    }

    #[test]
    fn needs_two_residual_df() {
        let f = frame(vec![("x", vec![0.0, 1.0, 2.0]), ("price", vec![0.0, 0.0, 3.0])]);
        let fit = fit_ols(&f, &["x"], "price").unwrap();
        assert!(flag_outliers(&fit, 3.0).is_err());
    }

    #[test]
    fn qq_single_and_monotone() {
        assert_eq!(qq_pairs(&[0.0]), vec![(0.0, 0.0)]);
        let pairs = qq_pairs(&[3.0, -1.0, 0.5, 2.0, -4.0]);
        for w in pairs.windows(2) {
            assert!(w[0].0 < w[1].0);
            assert!(w[0].1 <= w[1].1);
        }
    }

    #[test]
    fn funnel_degenerate_and_small() {
        let x: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let f = frame(vec![("x", x.clone()), ("price", x.iter().map(|v| 2.0 * v + 1.0).collect())]);
        let fit = fit_ols(&f, &["x"], "price").unwrap();
        let rvf = residual_vs_fitted(&fit);
        assert_eq!(
            rvf.funnel,
            Some(FunnelStatistic {
                correlation: 0.0,
                p_value: 1.0
            })
        );
        let small = frame(vec![("x", vec![1.0, 2.0, 3.0, 4.0]), ("price", vec![1.0, 3.0, 2.0, 5.0])]);
        let fit = fit_ols(&small, &["x"], "price").unwrap();
        assert_eq!(residual_vs_fitted(&fit).funnel, None);
        assert_eq!(residual_vs_fitted(&fit).points.len(), 4);
    }

    #[test]
    fn component_residual_single_predictor_identity() {
        let x = vec![3.0, 1.0, 2.0, 5.0, 4.0];
        let y = vec![2.0, 1.5, 1.0, 4.0, 2.5];
        let f = frame(vec![("x", x.clone()), ("price", y.clone())]);
        let fit = fit_ols(&f, &["x"], "price").unwrap();
        let cr = component_residual(&fit, &f, "x").unwrap();
        // sorted by x; partial residual = y − intercept
        let mut expect: Vec<(f64, f64)> = x.iter().zip(&y).map(|(a, b)| (*a, b - fit.beta[0])).collect();
        expect.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (got, want) in cr.iter().zip(&expect) {
            assert_eq!(got.0, want.0);
            assert!((got.1 - want.1).abs() < 1e-12);
        }
        assert!(matches!(component_residual(&fit, &f, "term"), Err(Error::UnknownColumn(_))));
    }

    #[test]
    fn component_residual_exact_linear() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let b = vec![2.0, -1.0, 0.0, 3.0, 1.0, -2.0];
        let y: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 5.0 + 1.5 * p - 0.5 * q).collect();
        let f = frame(vec![("a", a), ("b", b), ("price", y)]);
        let fit = fit_ols(&f, &["a", "b"], "price").unwrap();
        for (x, pr) in component_residual(&fit, &f, "b").unwrap() {
            assert!((pr - fit.beta[2] * x).abs() < 1e-10);
        }
    }
}
