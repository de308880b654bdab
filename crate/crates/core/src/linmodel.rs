//! Ordinary least squares with coefficient inference and single-predictor
//! screening.
//!
//! Standard errors are rse·√diag((XᵀX)⁻¹) with the diagonal taken from the
//! QR factor R. When a standard error is exactly zero (a perfect fit) the
//! t value is ±∞ with p = 0, or 0 with p = 1 for a zero estimate.

use serde::{Deserialize, Serialize};

use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::numkernel::{f_p_upper, qr_least_squares, student_t_p_two_sided, DenseMatrix, NumError};

pub const INTERCEPT_NAME: &str = "(Intercept)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OlsOptions {
    pub intercept: bool,
}

impl Default for OlsOptions {
    fn default() -> Self {
        Self { intercept: true }
    }
}

/// A fitted OLS model. Vectors indexed by coefficient start with the
/// intercept when one is present.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub response_name: String,
    pub predictor_names: Vec<String>,
    pub intercept: bool,
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub rse: f64,
    pub f_stat: f64,
    pub f_p_value: f64,
    pub df_model: usize,
    pub df_resid: usize,
    pub rss: f64,
    pub tss: f64,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    /// Hat-matrix diagonal.
    pub leverage: Vec<f64>,
}

impl LinearFit {
    pub fn nobs(&self) -> usize {
        self.residuals.len()
    }

    /// Predictor names without the intercept.
    pub fn slope_names(&self) -> &[String] {
        if self.intercept {
            &self.predictor_names[1..]
        } else {
            &self.predictor_names
        }
    }

    /// Position of a (non-intercept) predictor in `beta`.
    pub fn coefficient_index(&self, predictor: &str) -> Option<usize> {
        let key = predictor.to_lowercase();
        self.slope_names()
            .iter()
            .position(|n| *n == key)
            .map(|j| j + usize::from(self.intercept))
    }

    pub fn coefficient_table(&self) -> Vec<CoefficientRow> {
        (0..self.beta.len())
            .map(|i| CoefficientRow {
                name: self.predictor_names[i].clone(),
                estimate: self.beta[i],
                std_error: self.se[i],
                t_value: finite(self.t_values[i]),
                p_value: self.p_values[i],
                stars: significance_stars(self.p_values[i]).to_string(),
            })
            .collect()
    }
}

/// One line of a coefficient table. `t_value` is `None` when infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: Option<f64>,
    pub p_value: f64,
    pub stars: String,
}

pub(crate) fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// `****` p<0.001, `***` p<0.01, `**` p<0.05, `*` p<0.1.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "****"
    } else if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

/// Simple-regression summary for one predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenRow {
    pub predictor: String,
    pub f_stat: Option<f64>,
    pub f_p_value: f64,
    pub r_squared: f64,
    pub rse: f64,
}

pub fn fit_ols<S: AsRef<str>>(frame: &FactorFrame, predictors: &[S], response: &str) -> Result<LinearFit> {
    fit_ols_with(frame, predictors, response, OlsOptions::default())
}

pub fn fit_ols_with<S: AsRef<str>>(
    frame: &FactorFrame,
    predictors: &[S],
    response: &str,
    options: OlsOptions,
) -> Result<LinearFit> {
    let slopes: Vec<String> = predictors.iter().map(|p| p.as_ref().to_lowercase()).collect();
    let design = frame.design(&slopes)?;
    let y = frame.column(response)?;
    fit_design(&design, &slopes, &y, response, options)
}

/// Fits y on the columns of `design` (no intercept column included).
pub(crate) fn fit_design(
    design: &DenseMatrix,
    slope_names: &[String],
    y: &[f64],
    response: &str,
    options: OlsOptions,
) -> Result<LinearFit> {
    let n = design.rows();
    let p = design.cols();
    let k = p + usize::from(options.intercept);
    if k == 0 {
        return Err(Error::ConfigInvalid("model has no terms".into()));
    }
    if n <= k {
        return Err(Error::InsufficientRows {
            rows: n,
            required: k + 1,
        });
    }

    let mut names = Vec::with_capacity(k);
    if options.intercept {
        names.push(INTERCEPT_NAME.to_string());
    }
    names.extend(slope_names.iter().cloned());

    let x = if options.intercept {
        design.with_intercept()
    } else {
        design.clone()
    };
    let solution = qr_least_squares(&x, y).map_err(|e| match e {
        NumError::RankDeficient { column } => Error::RankDeficient(names[column].clone()),
        other => Error::Numeric(other),
    })?;
    let beta = solution.coefficients;
    let fitted = x.mul_vec(&beta)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();

    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let tss: f64 = if options.intercept {
        let ybar = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - ybar).powi(2)).sum()
    } else {
        y.iter().map(|v| v * v).sum()
    };
    let df_resid = n - k;
    let df_model = p;
    let dfr = df_resid as f64;

    let r_squared = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let n_eff = (n - usize::from(options.intercept)) as f64;
    let adj_r_squared = 1.0 - (1.0 - r_squared) * n_eff / dfr;
    let rse = (rss / dfr).sqrt();

    let unscaled = solution.factor.unscaled_variances();
    let se: Vec<f64> = unscaled.iter().map(|v| rse * v.sqrt()).collect();
    let mut t_values = Vec::with_capacity(k);
    let mut p_values = Vec::with_capacity(k);
    for (b, s) in beta.iter().zip(&se) {
        let t = if *s > 0.0 {
            b / s
        } else if *b == 0.0 {
            0.0
        } else {
            b.signum() * f64::INFINITY
        };
        p_values.push(student_t_p_two_sided(t, dfr)?);
        t_values.push(t);
    }

    let (f_stat, f_p_value) = if df_model == 0 {
        (0.0, 1.0)
    } else if r_squared < 1.0 {
        let f = (r_squared / df_model as f64) / ((1.0 - r_squared) / dfr);
        (f, f_p_upper(f, df_model as f64, dfr)?)
    } else {
        (f64::INFINITY, 0.0)
    };

    Ok(LinearFit {
        response_name: response.to_lowercase(),
        predictor_names: names,
        intercept: options.intercept,
        beta,
        se,
        t_values,
        p_values,
        r_squared,
        adj_r_squared,
        rse,
        f_stat,
        f_p_value,
        df_model,
        df_resid,
        rss,
        tss,
        residuals,
        fitted,
        leverage: solution.factor.leverage(),
    })
}

/// ŷ = intercept + rows·β for new observations (columns in the fit's
/// predictor order).
pub fn predict(fit: &LinearFit, new_rows: &DenseMatrix) -> Result<Vec<f64>> {
    let p = fit.slope_names().len();
    if new_rows.cols() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: new_rows.cols(),
        });
    }
    let (b0, slopes) = if fit.intercept {
        (fit.beta[0], &fit.beta[1..])
    } else {
        (0.0, &fit.beta[..])
    };
    Ok((0..new_rows.rows())
        .map(|i| b0 + crate::numkernel::dot(new_rows.row(i), slopes))
        .collect())
}

/// One simple regression `response ~ predictor` per listed predictor, in
/// the order given.
pub fn screen_predictors<S: AsRef<str>>(
    frame: &FactorFrame,
    predictors: &[S],
    response: &str,
) -> Result<Vec<ScreenRow>> {
    predictors
        .iter()
        .map(|p| {
            let name = p.as_ref().to_lowercase();
            let x = frame.column(&name)?;
            if x.iter().all(|v| *v == x[0]) {
                return Err(Error::ConstantPredictor(name));
            }
            let fit = fit_ols(frame, std::slice::from_ref(&name), response).map_err(|e| match e {
                Error::RankDeficient(_) => Error::ConstantPredictor(name.clone()),
                other => other,
            })?;
            Ok(ScreenRow {
                predictor: name,
                f_stat: finite(fit.f_stat),
                f_p_value: fit.f_p_value,
                r_squared: fit.r_squared,
                rse: fit.rse,
            })
        })
        .collect()
}
