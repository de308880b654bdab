//! Linear-model assumption checks: collinearity, outliers, residual shape,
//! normality, autocorrelation, component-plus-residual data, transform
//! suggestions and the predictor correlation matrix.

mod acf;
mod correlation;
mod residuals;
mod tukey;
mod vif;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use acf::{acf, default_max_lag, Autocorrelation};
pub use correlation::{correlation_p_value, pearson, pearson_matrix, CorrelationMatrix};
pub use residuals::{
    component_residual, externally_studentized, flag_outliers, internally_standardized, qq_pairs, qq_points,
    residual_vs_fitted, FunnelStatistic, ResidualFitted, DEFAULT_OUTLIER_THRESHOLD, FUNNEL_MIN_OBS,
};
pub(crate) use tukey::best_rung;
pub use tukey::{tukey_ladder, tukey_suggest, LadderStep};
pub use vif::{vif, vif_flagged, DEFAULT_VIF_THRESHOLD};

use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::linmodel::LinearFit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsOptions {
    pub outlier_threshold: f64,
    pub vif_threshold: f64,
    /// Defaults to min(20, n − 1).
    pub max_lag: Option<usize>,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions {
            outlier_threshold: DEFAULT_OUTLIER_THRESHOLD,
            vif_threshold: DEFAULT_VIF_THRESHOLD,
            max_lag: None,
        }
    }
}

/// Everything the residual-diagnostics figures need, for one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    /// Empty for single-predictor fits.
    pub vif: IndexMap<String, f64>,
    pub vif_flagged: Vec<String>,
    pub outlier_threshold: f64,
    /// 1-based.
    pub outlier_indices: Vec<usize>,
    pub studentized: Vec<f64>,
    pub leverage: Vec<f64>,
    pub rvf: Vec<(f64, f64)>,
    pub funnel: Option<FunnelStatistic>,
    pub qq: Vec<(f64, f64)>,
    /// Empty when the residuals are constant.
    pub acf: Vec<(usize, f64)>,
    pub acf_band: f64,
    pub crplots: IndexMap<String, Vec<(f64, f64)>>,
}

/// Runs every per-fit diagnostic. `frame` must be the frame `fit` was
/// estimated on.
pub fn diagnose(fit: &LinearFit, frame: &FactorFrame, options: &DiagnosticsOptions) -> Result<DiagnosticsReport> {
    let n = fit.nobs();
    if frame.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: frame.nrows(),
        });
    }
    let slopes = fit.slope_names().to_vec();
    let vif_map = if slopes.len() >= 2 {
        vif(frame, &slopes)?
    } else {
        IndexMap::new()
    };
    let vif_flags = vif_flagged(&vif_map, options.vif_threshold);
    let outlier_indices = flag_outliers(fit, options.outlier_threshold)?;
    let rvf = residual_vs_fitted(fit);

    let max_lag = options.max_lag.unwrap_or_else(|| default_max_lag(n));
    let (acf_points, acf_band) = match acf(&fit.residuals, max_lag) {
        Ok(a) => (a.lags, a.band),
        Err(Error::ZeroVariance(_)) => (Vec::new(), 1.96 / (n as f64).sqrt()),
        Err(e) => return Err(e),
    };

    let crplots = slopes
        .par_iter()
        .map(|name| component_residual(fit, frame, name).map(|pts| (name.clone(), pts)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();

    Ok(DiagnosticsReport {
        vif: vif_map,
        vif_flagged: vif_flags,
        outlier_threshold: options.outlier_threshold,
        outlier_indices,
        studentized: externally_studentized(fit),
        leverage: fit.leverage.clone(),
        rvf: rvf.points,
        funnel: rvf.funnel,
        qq: qq_points(fit),
        acf: acf_points,
        acf_band,
        crplots,
    })
}
