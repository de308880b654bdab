//! Seeded generator of panel factor data.
//!
//! Rows are ordered company-major (company 1, quarters 1..q; company 2, ...).
//! Predictor draws use stream 0 and response noise uses stream 1 of
//! [`crate::rng::stream_rng`], so the output depends only on the
//! configuration.
//!
//! Draw ranges: dta ~ U(0.3, 0.6), roe ~ U(0.05, 0.35),
//! roa = roe·(1 − dta)·exp(0.05·z), tato ~ U(0.5, 1.5), cr ~ U(0.8, 2.8).
//! roa follows the accounting identity ROA = ROE × equity/assets, so it is
//! strongly collinear with roe and dta.

use rand::Rng;
use rand_distr::StandardNormal;

use super::frame::{FactorFrame, CANONICAL_PREDICTORS, DEFAULT_RESPONSE, PANEL_COLUMN, TERM_COLUMN};
use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;
use crate::rng::stream_rng;

/// Intercept then term, panel, dta, roe, roa, tato, cr.
pub const DEFAULT_COEFFICIENTS: [f64; 8] = [
    -1691.838, 42.113, 213.175, 2536.810, 342.091, 0.0, 2367.872, -32.597,
];
pub const DEFAULT_NOISE_SD: f64 = 250.0;
/// 1-based rows whose response is shifted upwards by `outlier_shift_sd`·σ.
pub const DEFAULT_OUTLIER_ROWS: [usize; 3] = [3, 38, 48];
pub const DEFAULT_OUTLIER_SHIFT_SD: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub companies: usize,
    pub quarters: usize,
    /// Intercept followed by one coefficient per canonical predictor.
    pub coefficients: Vec<f64>,
    pub noise_sd: f64,
    /// 1-based rows to corrupt; rows beyond the frame are ignored.
    pub outlier_rows: Vec<usize>,
    pub outlier_shift_sd: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            companies: 5,
            quarters: 14,
            coefficients: DEFAULT_COEFFICIENTS.to_vec(),
            noise_sd: DEFAULT_NOISE_SD,
            outlier_rows: DEFAULT_OUTLIER_ROWS.to_vec(),
            outlier_shift_sd: DEFAULT_OUTLIER_SHIFT_SD,
        }
    }
}

impl SynthConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

pub fn synthesize(config: &SynthConfig) -> Result<FactorFrame> {
    if config.companies == 0 || config.quarters == 0 {
        return Err(Error::ConfigInvalid(
            "companies and quarters must both be at least 1".into(),
        ));
    }
    if !(config.noise_sd >= 0.0 && config.noise_sd.is_finite()) {
        return Err(Error::ConfigInvalid(format!(
            "noise_sd must be finite and non-negative, got {}",
            config.noise_sd
        )));
    }
    let p = CANONICAL_PREDICTORS.len();
    if config.coefficients.len() != p + 1 {
        return Err(Error::DimensionMismatch {
            expected: p + 1,
            found: config.coefficients.len(),
        });
    }

    let n = config.companies * config.quarters;
    let mut predictors_rng = stream_rng(config.seed, 0);
    let mut noise_rng = stream_rng(config.seed, 1);
    let mut data = Vec::with_capacity(n * (p + 1));

    for company in 1..=config.companies {
        for quarter in 1..=config.quarters {
            let dta: f64 = predictors_rng.random_range(0.3..0.6);
            let roe: f64 = predictors_rng.random_range(0.05..0.35);
            let z: f64 = predictors_rng.sample(StandardNormal);
            let roa = roe * (1.0 - dta) * (0.05 * z).exp();
            let tato: f64 = predictors_rng.random_range(0.5..1.5);
            let cr: f64 = predictors_rng.random_range(0.8..2.8);
            let row = [quarter as f64, company as f64, dta, roe, roa, tato, cr];

            let signal = config.coefficients[0]
                + row
                    .iter()
                    .zip(&config.coefficients[1..])
                    .map(|(x, b)| x * b)
                    .sum::<f64>();
            let eps: f64 = noise_rng.sample(StandardNormal);
            data.extend_from_slice(&row);
            data.push(signal + config.noise_sd * eps);
        }
    }

    for &r in &config.outlier_rows {
        if (1..=n).contains(&r) {
            data[(r - 1) * (p + 1) + p] += config.outlier_shift_sd * config.noise_sd;
        }
    }

    let mut names: Vec<String> = CANONICAL_PREDICTORS.iter().map(|s| s.to_string()).collect();
    names.push(DEFAULT_RESPONSE.into());
    let values = DenseMatrix::new(n, p + 1, data)?;
    FactorFrame::new(names, values, DEFAULT_RESPONSE, TERM_COLUMN, PANEL_COLUMN)
}
