use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample autocorrelations with the ±1.96/√n white-noise band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Autocorrelation {
    pub lags: Vec<(usize, f64)>,
    pub band: f64,
}

/// min(20, n − 1).
pub fn default_max_lag(n: usize) -> usize {
    20.min(n.saturating_sub(1))
}

/// acf(k) = Σ(xₜ − x̄)(xₜ₊ₖ − x̄) / Σ(xₜ − x̄)² for k = 0..=max_lag.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Autocorrelation> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientRows { rows: n, required: 2 });
    }
    if max_lag >= n {
        return Err(Error::LagTooLarge { max_lag, len: n });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom: f64 = centered.iter().map(|d| d * d).sum();
    if denom <= 0.0 || series.iter().all(|x| *x == series[0]) {
        return Err(Error::ZeroVariance("series".into()));
    }
    let lags = (0..=max_lag)
        .map(|k| {
            if k == 0 {
                return (0, 1.0);
            }
            let num: f64 = centered[..n - k].iter().zip(&centered[k..]).map(|(a, b)| a * b).sum();
            (k, num / denom)
        })
        .collect();
    Ok(Autocorrelation {
        lags,
        band: 1.96 / (n as f64).sqrt(),
    })
}
