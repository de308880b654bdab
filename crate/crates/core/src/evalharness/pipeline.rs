use std::collections::BTreeSet;

use indexmap::IndexMap;

use super::compare::{paired_t_test, Winner};
use super::cv::{kfold_cv, ModelSpec};
use super::report::{
    AnalysisReport, AnalysisSettings, ComparisonResult, CorrelationSection, DataSummary, EvaluationSection,
    FitSummary, ForestSection, OutlierSection, SignificanceMask, TransformSuggestion, VifSection,
};
use crate::dataset::{remove_rows, FactorFrame};
use crate::diagnostics::{
    best_rung, diagnose, flag_outliers, pearson_matrix, tukey_ladder, vif, vif_flagged, DiagnosticsOptions,
    DEFAULT_OUTLIER_THRESHOLD, DEFAULT_VIF_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::forest::{feature_importance, train_forest, ForestConfig, ForestModel};
use crate::linmodel::{fit_ols, screen_predictors};
use crate::SPEC_VERSION;

pub const DEFAULT_K: usize = 10;
pub const DEFAULT_ALPHA: f64 = 0.05;
/// The stricter level of the second correlation mask.
pub const STRICT_ALPHA: f64 = 0.01;
pub const PAIRING: &str = "per-fold MAE";

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    /// `None` uses every non-response column.
    pub predictors: Option<Vec<String>>,
    pub seed: u64,
    pub k: usize,
    pub alpha: f64,
    pub outlier_threshold: f64,
    pub vif_threshold: f64,
    /// Repeatedly drop the predictor with the largest VIF while it is at or
    /// above the threshold.
    pub drop_collinear: bool,
    /// Refit without the flagged outlier rows.
    pub remove_outliers: bool,
    /// Its seed is replaced by `seed`.
    pub forest: ForestConfig,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            predictors: None,
            seed: 42,
            k: DEFAULT_K,
            alpha: DEFAULT_ALPHA,
            outlier_threshold: DEFAULT_OUTLIER_THRESHOLD,
            vif_threshold: DEFAULT_VIF_THRESHOLD,
            drop_collinear: false,
            remove_outliers: false,
            forest: ForestConfig::default(),
        }
    }
}

pub struct Analysis {
    pub report: AnalysisReport,
    pub forest: ForestModel,
}

/// Drops the largest-VIF predictor while it reaches `threshold`; an exactly
/// collinear predictor is dropped first. Returns the dropped names in order.
fn drop_collinear(predictors: &mut Vec<String>, frame: &FactorFrame, threshold: f64) -> Result<Vec<String>> {
    let mut dropped = Vec::new();
    while predictors.len() >= 2 {
        let victim = match vif(frame, predictors) {
            Ok(values) => {
                let (name, max) = values
                    .iter()
                    .fold((None, f64::NEG_INFINITY), |acc, (k, v)| if *v > acc.1 { (Some(k), *v) } else { acc });
                if max < threshold {
                    break;
                }
                name.cloned().expect("at least two predictors")
            }
            Err(Error::CollinearSingular(name)) => name,
            Err(e) => return Err(e),
        };
        predictors.retain(|p| *p != victim);
        dropped.push(victim);
    }
    Ok(dropped)
}

/// Cross-validates the linear model and the forest on identical folds and
/// runs the paired t-test on their per-fold MAE.
pub fn compare_models(
    frame: &FactorFrame,
    predictors: &[String],
    forest: &ForestConfig,
    k: usize,
    seed: u64,
    alpha: f64,
) -> Result<(EvaluationSection, ComparisonResult)> {
    let linear_spec = ModelSpec::Linear {
        predictors: predictors.to_vec(),
    };
    let forest_spec = ModelSpec::Forest {
        config: forest.clone(),
        predictors: predictors.to_vec(),
    };
    let linear = kfold_cv(frame, &linear_spec, k, seed)?;
    let forest = kfold_cv(frame, &forest_spec, k, seed)?;
    let test = paired_t_test(&linear.fold_mae(), &forest.fold_mae(), alpha)?;
    let winner = match test.winner {
        Winner::A => linear.model_name.clone(),
        Winner::B => forest.model_name.clone(),
        Winner::Tie => "tie".to_string(),
    };
    let comparison = ComparisonResult {
        model_a: linear.model_name.clone(),
        model_b: forest.model_name.clone(),
        pairing: PAIRING.into(),
        alpha,
        t_stat: test.t_stat,
        p_value: test.p_value,
        df: test.df,
        mean_difference: test.mean_difference,
        marker: if test.winner == Winner::Tie { String::new() } else { "*".into() },
        winner,
    };
    Ok((EvaluationSection { k, seed, linear, forest }, comparison))
}

/// The full workflow: screening, correlation, VIF, fit and outlier flags,
/// optional refit, diagnostics, forest, cross-validated comparison.
pub fn analyze(frame: &FactorFrame, options: &AnalyzeOptions) -> Result<Analysis> {
    if !(options.alpha > 0.0 && options.alpha < 1.0) {
        return Err(Error::ConfigInvalid(format!("alpha must lie in (0, 1), got {}", options.alpha)));
    }
    if options.vif_threshold.is_nan() || options.vif_threshold <= 0.0 {
        return Err(Error::ConfigInvalid(format!(
            "VIF threshold must be positive, got {}",
            options.vif_threshold
        )));
    }
    let response = frame.response_name().to_string();
    let candidates: Vec<String> = match &options.predictors {
        Some(p) => p.iter().map(|s| s.to_lowercase()).collect(),
        None => frame.predictor_names(),
    };
    if candidates.is_empty() {
        return Err(Error::ConfigInvalid("no predictors selected".into()));
    }
    if candidates.contains(&response) {
        return Err(Error::ConfigInvalid(format!("response {response} cannot also be a predictor")));
    }
    let forest_config = ForestConfig {
        seed: options.seed,
        ..options.forest.clone()
    };
    forest_config.resolve_m_try(candidates.len())?;

    let screening = screen_predictors(frame, &candidates, &response)?;

    let mut corr_cols = candidates.clone();
    corr_cols.push(response.clone());
    let corr = pearson_matrix(frame, &corr_cols, options.alpha)?;
    let mut levels = vec![options.alpha];
    if STRICT_ALPHA < options.alpha {
        levels.push(STRICT_ALPHA);
    }
    let correlation = CorrelationSection {
        masks: levels
            .into_iter()
            .map(|alpha| SignificanceMask {
                alpha,
                significant: corr.mask_at(alpha),
            })
            .collect(),
        names: corr.names,
        r: corr.r,
        p_values: corr.p_values,
    };

    let initial_vif = if candidates.len() >= 2 {
        match vif(frame, &candidates) {
            Ok(v) => v,
            Err(Error::CollinearSingular(_)) if options.drop_collinear => IndexMap::new(),
            Err(e) => return Err(e),
        }
    } else {
        IndexMap::new()
    };
    let flagged = vif_flagged(&initial_vif, options.vif_threshold);
    let mut kept = candidates.clone();
    let dropped = if options.drop_collinear {
        drop_collinear(&mut kept, frame, options.vif_threshold)?
    } else {
        Vec::new()
    };
    let kept_vif = if kept.len() >= 2 { vif(frame, &kept)? } else { IndexMap::new() };

    let initial = fit_ols(frame, &kept, &response)?;
    let outlier_rows = flag_outliers(&initial, options.outlier_threshold)?;
    let (work, fit, removed) = if options.remove_outliers && !outlier_rows.is_empty() {
        let zero_based: BTreeSet<usize> = outlier_rows.iter().map(|r| r - 1).collect();
        let reduced = remove_rows(frame, &zero_based)?;
        let refit = fit_ols(&reduced, &kept, &response)?;
        (reduced, refit, outlier_rows.clone())
    } else {
        (frame.clone(), initial.clone(), Vec::new())
    };

    let diagnostics = diagnose(
        &fit,
        &work,
        &DiagnosticsOptions {
            outlier_threshold: options.outlier_threshold,
            vif_threshold: options.vif_threshold,
            max_lag: None,
        },
    )?;

    let transforms = kept
        .iter()
        .map(|p| {
            let ladder = tukey_ladder(&work, p, &response)?;
            Ok(TransformSuggestion {
                predictor: p.clone(),
                suggested: best_rung(&ladder),
                ladder,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let forest = train_forest(&work, &kept, &response, &forest_config)?;
    let importance = feature_importance(&forest);

    let (evaluation, comparison) =
        compare_models(&work, &kept, &forest_config, options.k, options.seed, options.alpha)?;

    let report = AnalysisReport {
        spec_version: SPEC_VERSION.into(),
        settings: AnalysisSettings {
            seed: options.seed,
            response: response.clone(),
            predictors: candidates,
            k: options.k,
            alpha: options.alpha,
            outlier_threshold: options.outlier_threshold,
            vif_threshold: options.vif_threshold,
            drop_collinear: options.drop_collinear,
            remove_outliers: options.remove_outliers,
            forest: forest_config,
        },
        data: DataSummary {
            rows: frame.nrows(),
            columns: frame.column_names().to_vec(),
        },
        screening,
        correlation,
        vif: VifSection {
            threshold: options.vif_threshold,
            initial: initial_vif,
            flagged,
            dropped,
            kept: kept_vif,
        },
        initial_fit: FitSummary::from(&initial),
        outliers: OutlierSection {
            threshold: options.outlier_threshold,
            flagged: outlier_rows,
            removed,
        },
        final_fit: FitSummary::from(&fit),
        diagnostics,
        transforms,
        forest: ForestSection {
            config: forest.config.clone(),
            importance,
        },
        evaluation,
        comparison,
    };
    Ok(Analysis { report, forest })
}
