//! The analysis report document and its renderings: plain-text tables,
//! CSV tables, plot-data CSV and SVG figures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::cv::EvalSummary;
use super::svg::{bar_chart, correlation_grid, Chart, Layer};
use crate::dataset::TransformKind;
use crate::diagnostics::{DiagnosticsReport, LadderStep};
use crate::error::Result;
use crate::forest::ForestConfig;
use crate::linmodel::{finite, CoefficientRow, LinearFit, ScreenRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub seed: u64,
    pub response: String,
    pub predictors: Vec<String>,
    pub k: usize,
    pub alpha: f64,
    pub outlier_threshold: f64,
    pub vif_threshold: f64,
    pub drop_collinear: bool,
    pub remove_outliers: bool,
    pub forest: ForestConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub rows: usize,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceMask {
    pub alpha: f64,
    pub significant: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSection {
    pub names: Vec<String>,
    pub r: Vec<Vec<f64>>,
    pub p_values: Vec<Vec<f64>>,
    pub masks: Vec<SignificanceMask>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VifSection {
    pub threshold: f64,
    /// VIF of every candidate predictor before any removal.
    pub initial: IndexMap<String, f64>,
    pub flagged: Vec<String>,
    /// Removed in this order when collinear dropping was requested.
    pub dropped: Vec<String>,
    /// VIF of the predictors that were kept.
    pub kept: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub response: String,
    pub nobs: usize,
    pub coefficients: Vec<CoefficientRow>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub rse: f64,
    pub f_stat: Option<f64>,
    pub f_p_value: f64,
    pub df_model: usize,
    pub df_resid: usize,
}

impl From<&LinearFit> for FitSummary {
    fn from(fit: &LinearFit) -> Self {
        FitSummary {
            response: fit.response_name.clone(),
            nobs: fit.nobs(),
            coefficients: fit.coefficient_table(),
            r_squared: fit.r_squared,
            adj_r_squared: fit.adj_r_squared,
            rse: fit.rse,
            f_stat: finite(fit.f_stat),
            f_p_value: fit.f_p_value,
            df_model: fit.df_model,
            df_resid: fit.df_resid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierSection {
    pub threshold: f64,
    /// 1-based rows flagged on the initial fit.
    pub flagged: Vec<usize>,
    /// 1-based rows removed before the final fit.
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSuggestion {
    pub predictor: String,
    pub ladder: Vec<LadderStep>,
    pub suggested: TransformKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestSection {
    pub config: ForestConfig,
    pub importance: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSection {
    pub k: usize,
    pub seed: u64,
    pub linear: EvalSummary,
    pub forest: EvalSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub model_a: String,
    pub model_b: String,
    /// What the paired observations are.
    pub pairing: String,
    pub alpha: f64,
    /// `None` when the differences are constant and nonzero.
    pub t_stat: Option<f64>,
    pub p_value: f64,
    pub df: usize,
    /// Mean of (error_a − error_b).
    pub mean_difference: f64,
    /// Model name, or "tie".
    pub winner: String,
    /// "*" when p < alpha.
    pub marker: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub spec_version: String,
    pub settings: AnalysisSettings,
    pub data: DataSummary,
    pub screening: Vec<ScreenRow>,
    pub correlation: CorrelationSection,
    pub vif: VifSection,
    pub initial_fit: FitSummary,
    pub outliers: OutlierSection,
    pub final_fit: FitSummary,
    pub diagnostics: DiagnosticsReport,
    pub transforms: Vec<TransformSuggestion>,
    pub forest: ForestSection,
    pub evaluation: EvaluationSection,
    pub comparison: ComparisonResult,
}

pub fn display_name(model: &str) -> &str {
    match model {
        "linear_regression" => "Linear Regression",
        "random_forest" => "Random Forest",
        other => other,
    }
}

/// R-style p-value text.
pub fn format_p(p: f64) -> String {
    if p < 2.2e-16 {
        "< 2.2e-16".into()
    } else if p < 1e-4 {
        format!("{p:.3e}")
    } else {
        format!("{p:.4}")
    }
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "NA".into(), |x| format!("{x:.digits$}"))
}

pub fn coefficient_text(fit: &FitSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<14} {:>14} {:>12} {:>9} {:>11}",
        "", "Estimate", "Std. Error", "t value", "Pr(>|t|)"
    );
    for row in &fit.coefficients {
        let _ = writeln!(
            out,
            "{:<14} {:>14.3} {:>12.3} {:>9} {:>11} {}",
            row.name,
            row.estimate,
            row.std_error,
            opt(row.t_value, 3),
            format_p(row.p_value),
            row.stars
        );
    }
    let _ = writeln!(out, "---");
    let _ = writeln!(out, "Signif. codes: '****' 0.001 '***' 0.01 '**' 0.05 '*' 0.1");
    let _ = writeln!(
        out,
        "Residual standard error: {:.2} on {} degrees of freedom",
        fit.rse, fit.df_resid
    );
    let _ = writeln!(
        out,
        "Multiple R-squared: {:.4}, Adjusted R-squared: {:.4}",
        fit.r_squared, fit.adj_r_squared
    );
    let _ = writeln!(
        out,
        "F-statistic: {} on {} and {} DF, p-value: {}",
        opt(fit.f_stat, 2),
        fit.df_model,
        fit.df_resid,
        format_p(fit.f_p_value)
    );
    out
}

pub fn comparison_text(eval: &EvaluationSection, cmp: &ComparisonResult) -> String {
    let mark = |model: &str| if cmp.winner == model { cmp.marker.as_str() } else { "" };
    let cell = |v: Option<f64>, model: &str| format!("{}{}", opt(v, 3), mark(model));
    let (lin, rf) = (&eval.linear, &eval.forest);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<26} {:>20} {:>20}",
        "",
        display_name(&lin.model_name),
        display_name(&rf.model_name)
    );
    let rows: [(&str, Option<f64>, Option<f64>); 4] = [
        ("MAE", Some(lin.mae), Some(rf.mae)),
        ("RMSE", Some(lin.rmse), Some(rf.rmse)),
        ("Correlation coefficient r", lin.pearson_r, rf.pearson_r),
        ("r^2", lin.r_squared, rf.r_squared),
    ];
    for (label, a, b) in rows {
        let _ = writeln!(
            out,
            "{:<26} {:>20} {:>20}",
            label,
            cell(a, &lin.model_name),
            cell(b, &rf.model_name)
        );
    }
    let _ = writeln!(
        out,
        "Paired t-test on {} ({}-fold CV): t = {}, df = {}, p = {}",
        cmp.pairing,
        eval.k,
        opt(cmp.t_stat, 4),
        cmp.df,
        format_p(cmp.p_value)
    );
    if cmp.marker.is_empty() {
        let _ = writeln!(out, "No significant difference at the {} level.", cmp.alpha);
    } else {
        let _ = writeln!(
            out,
            "* {} is significantly better at the {} level.",
            display_name(&cmp.winner),
            cmp.alpha
        );
    }
    out
}

pub fn render_text(report: &AnalysisReport) -> String {
    let s = &report.settings;
    let mut out = String::new();
    let _ = writeln!(out, "Factor analysis report (spec_version {})", report.spec_version);
    let _ = writeln!(
        out,
        "Response: {}; rows: {}; seed: {}",
        s.response, report.data.rows, s.seed
    );
    let _ = writeln!(out, "Candidate predictors: {}\n", s.predictors.join(", "));

    let _ = writeln!(out, "== Model comparison ==");
    out.push_str(&comparison_text(&report.evaluation, &report.comparison));

    let _ = writeln!(out, "\n== Single-predictor screening ==");
    let _ = writeln!(
        out,
        "{:<10} {:>12} {:>11} {:>8} {:>12}",
        "Predictor", "F-statistic", "p-value", "R^2", "RSE"
    );
    for row in &report.screening {
        let _ = writeln!(
            out,
            "{:<10} {:>12} {:>11} {:>8.4} {:>12.3}",
            row.predictor,
            opt(row.f_stat, 3),
            format_p(row.f_p_value),
            row.r_squared,
            row.rse
        );
    }

    let _ = writeln!(out, "\n== Correlation (Pearson r) ==");
    let c = &report.correlation;
    let _ = write!(out, "{:<8}", "");
    for name in &c.names {
        let _ = write!(out, " {name:>8}");
    }
    out.push('\n');
    for (i, name) in c.names.iter().enumerate() {
        let _ = write!(out, "{name:<8}");
        for j in 0..c.names.len() {
            let _ = write!(out, " {:>8.3}", c.r[i][j]);
        }
        out.push('\n');
    }
    for mask in &c.masks {
        let pairs: Vec<String> = (0..c.names.len())
            .flat_map(|i| ((i + 1)..c.names.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| !mask.significant[i][j])
            .map(|(i, j)| format!("{}~{}", c.names[i], c.names[j]))
            .collect();
        let _ = writeln!(
            out,
            "Not significant at {}: {}",
            mask.alpha,
            if pairs.is_empty() { "none".into() } else { pairs.join(", ") }
        );
    }

    let _ = writeln!(out, "\n== Variance inflation factors (threshold {}) ==", report.vif.threshold);
    for (name, v) in &report.vif.initial {
        let flag = if report.vif.flagged.contains(name) { "  >= threshold" } else { "" };
        let _ = writeln!(out, "{name:<10} {v:>10.3}{flag}");
    }
    if !report.vif.dropped.is_empty() {
        let _ = writeln!(out, "Dropped: {}", report.vif.dropped.join(", "));
    }

    let _ = writeln!(out, "\n== Initial fit ==");
    out.push_str(&coefficient_text(&report.initial_fit));
    let o = &report.outliers;
    let list = |v: &[usize]| {
        if v.is_empty() {
            "none".to_string()
        } else {
            v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
        }
    };
    let _ = writeln!(
        out,
        "\nOutliers (|studentized residual| > {}): {}",
        o.threshold,
        list(&o.flagged)
    );
    let _ = writeln!(out, "Rows removed: {}", list(&o.removed));

    let _ = writeln!(out, "\n== Final fit ==");
    out.push_str(&coefficient_text(&report.final_fit));

    let d = &report.diagnostics;
    let _ = writeln!(out, "\n== Diagnostics ==");
    match d.funnel {
        Some(f) => {
            let _ = writeln!(
                out,
                "Funnel check: corr(|residual|, fitted) = {:.4}, p = {}",
                f.correlation,
                format_p(f.p_value)
            );
        }
        None => {
            let _ = writeln!(out, "Funnel check: not computed (fewer than 10 observations)");
        }
    }
    let outside = d.acf.iter().skip(1).filter(|(_, r)| r.abs() > d.acf_band).count();
    let _ = writeln!(
        out,
        "Residual ACF: {} of {} lags outside ±{:.4}",
        outside,
        d.acf.len().saturating_sub(1),
        d.acf_band
    );
    for t in &report.transforms {
        let _ = writeln!(out, "Suggested transform for {}: {}", t.predictor, t.suggested);
    }

    let _ = writeln!(out, "\n== Random forest ==");
    let fc = &report.forest.config;
    let _ = writeln!(
        out,
        "trees = {}, m_try = {}, min_leaf = {}, max_depth = {}, bootstrap = {}",
        fc.n_trees,
        fc.m_try.map_or("auto".into(), |m| m.to_string()),
        fc.min_leaf,
        fc.max_depth.map_or("unlimited".into(), |m| m.to_string()),
        fc.bootstrap
    );
    for (name, v) in &report.forest.importance {
        let _ = writeln!(out, "{name:<10} {v:>8.4}");
    }
    out
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?)
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

fn pairs_csv(x: &str, y: &str, points: &[(f64, f64)]) -> Result<Vec<u8>> {
    csv_bytes(&[x, y], points.iter().map(|p| vec![num(p.0), num(p.1)]).collect())
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

/// Every table and figure as (relative path, contents), in a fixed order.
pub fn render_artifacts(report: &AnalysisReport) -> Result<Vec<(PathBuf, Vec<u8>)>> {
    let mut files: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    let mut put = |path: String, bytes: Vec<u8>| files.push((PathBuf::from(path), bytes));

    put(
        "tables/screening.csv".into(),
        csv_bytes(
            &["predictor", "f_stat", "f_p_value", "r_squared", "rse"],
            report
                .screening
                .iter()
                .map(|r| vec![r.predictor.clone(), opt_num(r.f_stat), num(r.f_p_value), num(r.r_squared), num(r.rse)])
                .collect(),
        )?,
    );

    let c = &report.correlation;
    let mut header = vec!["row", "column", "r", "p_value"];
    let mask_cols: Vec<String> = c.masks.iter().map(|m| format!("significant_{}", m.alpha)).collect();
    header.extend(mask_cols.iter().map(String::as_str));
    let mut rows = Vec::new();
    for i in 0..c.names.len() {
        for j in 0..c.names.len() {
            let mut row = vec![c.names[i].clone(), c.names[j].clone(), num(c.r[i][j]), num(c.p_values[i][j])];
            row.extend(c.masks.iter().map(|m| m.significant[i][j].to_string()));
            rows.push(row);
        }
    }
    put("tables/correlation.csv".into(), csv_bytes(&header, rows)?);

    put(
        "tables/vif.csv".into(),
        csv_bytes(
            &["predictor", "vif", "flagged", "dropped"],
            report
                .vif
                .initial
                .iter()
                .map(|(k, v)| {
                    vec![
                        k.clone(),
                        num(*v),
                        report.vif.flagged.contains(k).to_string(),
                        report.vif.dropped.contains(k).to_string(),
                    ]
                })
                .collect(),
        )?,
    );

    for (name, fit) in [("coefficients_initial", &report.initial_fit), ("coefficients", &report.final_fit)] {
        put(
            format!("tables/{name}.csv"),
            csv_bytes(
                &["term", "estimate", "std_error", "t_value", "p_value", "stars"],
                fit.coefficients
                    .iter()
                    .map(|r| {
                        vec![
                            r.name.clone(),
                            num(r.estimate),
                            num(r.std_error),
                            opt_num(r.t_value),
                            num(r.p_value),
                            r.stars.clone(),
                        ]
                    })
                    .collect(),
            )?,
        );
    }

    put(
        "tables/outliers.csv".into(),
        csv_bytes(
            &["row", "studentized", "leverage", "removed"],
            report
                .outliers
                .flagged
                .iter()
                .map(|&r| {
                    // studentized/leverage refer to the final fit, so only
                    // report them when no rows were removed
                    let same = report.outliers.removed.is_empty();
                    vec![
                        r.to_string(),
                        if same { num(report.diagnostics.studentized[r - 1]) } else { String::new() },
                        if same { num(report.diagnostics.leverage[r - 1]) } else { String::new() },
                        report.outliers.removed.contains(&r).to_string(),
                    ]
                })
                .collect(),
        )?,
    );

    let eval = &report.evaluation;
    let cmp = &report.comparison;
    let models = [&eval.linear, &eval.forest];
    put(
        "tables/model_comparison.csv".into(),
        csv_bytes(
            &["model", "mae", "rmse", "pearson_r", "r_squared", "marker"],
            models
                .iter()
                .map(|m| {
                    vec![
                        m.model_name.clone(),
                        num(m.mae),
                        num(m.rmse),
                        opt_num(m.pearson_r),
                        opt_num(m.r_squared),
                        if cmp.winner == m.model_name { cmp.marker.clone() } else { String::new() },
                    ]
                })
                .collect(),
        )?,
    );
    put(
        "tables/cv_folds.csv".into(),
        csv_bytes(
            &["model", "fold", "size", "mae", "rmse", "r"],
            models
                .iter()
                .flat_map(|m| {
                    m.per_fold.iter().map(move |f| {
                        vec![
                            m.model_name.clone(),
                            f.fold.to_string(),
                            f.size.to_string(),
                            num(f.mae),
                            num(f.rmse),
                            opt_num(f.r),
                        ]
                    })
                })
                .collect(),
        )?,
    );
    put(
        "tables/transforms.csv".into(),
        csv_bytes(
            &["predictor", "transform", "r_squared", "suggested"],
            report
                .transforms
                .iter()
                .flat_map(|t| {
                    t.ladder.iter().map(move |s| {
                        vec![
                            t.predictor.clone(),
                            s.kind.to_string(),
                            opt_num(s.r_squared),
                            (s.kind == t.suggested).to_string(),
                        ]
                    })
                })
                .collect(),
        )?,
    );
    put(
        "tables/forest_importance.csv".into(),
        csv_bytes(
            &["feature", "importance"],
            report.forest.importance.iter().map(|(k, v)| vec![k.clone(), num(*v)]).collect(),
        )?,
    );

    // Figures: plot data next to each SVG.
    let d = &report.diagnostics;
    let coef = |name: &str| {
        report
            .final_fit
            .coefficients
            .iter()
            .find(|r| r.name == name)
            .map_or(0.0, |r| r.estimate)
    };
    for (name, points) in &d.crplots {
        let stem = format!("figures/component_residual_{}", file_stem(name));
        put(format!("{stem}.csv"), pairs_csv(name, "partial_residual", points)?);
        let beta = coef(name);
        let (lo, hi) = (points.first().map_or(0.0, |p| p.0), points.last().map_or(0.0, |p| p.0));
        let svg = Chart::new(format!("Component + residual: {name}"), name.as_str(), "partial residual")
            .layer(Layer::Points(points.clone()))
            .layer(Layer::Line {
                points: vec![(lo, beta * lo), (hi, beta * hi)],
                dashed: true,
            })
            .render();
        put(format!("{stem}.svg"), svg.into_bytes());
    }
    for mask in &c.masks {
        let svg = correlation_grid(
            &format!("Pearson correlation (X: not significant at {})", mask.alpha),
            &c.names,
            &c.r,
            &mask.significant,
        );
        put(format!("figures/correlation_alpha_{}.svg", mask.alpha), svg.into_bytes());
    }
    put("figures/residuals_vs_fitted.csv".into(), pairs_csv("fitted", "residual", &d.rvf)?);
    put(
        "figures/residuals_vs_fitted.svg".into(),
        Chart::new("Residuals vs fitted", "fitted", "residual")
            .layer(Layer::Points(d.rvf.clone()))
            .layer(Layer::HLine { y: 0.0, dashed: true })
            .render()
            .into_bytes(),
    );
    let lev: Vec<(f64, f64)> = d.leverage.iter().copied().zip(d.studentized.iter().copied()).collect();
    put("figures/residuals_vs_leverage.csv".into(), pairs_csv("leverage", "studentized", &lev)?);
    put(
        "figures/residuals_vs_leverage.svg".into(),
        Chart::new("Studentized residuals vs leverage", "leverage", "studentized residual")
            .layer(Layer::Points(lev))
            .layer(Layer::HLine {
                y: d.outlier_threshold,
                dashed: true,
            })
            .layer(Layer::HLine {
                y: -d.outlier_threshold,
                dashed: true,
            })
            .render()
            .into_bytes(),
    );
    put("figures/qq.csv".into(), pairs_csv("theoretical", "sample", &d.qq)?);
    let (qlo, qhi) = (d.qq.first().map_or(-1.0, |p| p.0), d.qq.last().map_or(1.0, |p| p.0));
    put(
        "figures/qq.svg".into(),
        Chart::new("Normal Q-Q", "theoretical quantile", "standardized residual")
            .layer(Layer::Points(d.qq.clone()))
            .layer(Layer::Line {
                points: vec![(qlo, qlo), (qhi, qhi)],
                dashed: true,
            })
            .render()
            .into_bytes(),
    );
    put(
        "figures/vif.csv".into(),
        csv_bytes(&["predictor", "vif"], d.vif.iter().map(|(k, v)| vec![k.clone(), num(*v)]).collect())?,
    );
    let bars: Vec<(String, f64)> = d.vif.iter().map(|(k, v)| (k.clone(), *v)).collect();
    put(
        "figures/vif.svg".into(),
        bar_chart("Variance inflation factors", &bars, Some(report.vif.threshold)).into_bytes(),
    );
    let acf_pts: Vec<(f64, f64)> = d.acf.iter().map(|&(k, r)| (k as f64, r)).collect();
    put(
        "figures/acf.csv".into(),
        csv_bytes(&["lag", "acf"], d.acf.iter().map(|&(k, r)| vec![k.to_string(), num(r)]).collect())?,
    );
    put(
        "figures/acf.svg".into(),
        Chart::new("Residual autocorrelation", "lag", "ACF")
            .layer(Layer::Stems(acf_pts))
            .layer(Layer::HLine {
                y: d.acf_band,
                dashed: true,
            })
            .layer(Layer::HLine {
                y: -d.acf_band,
                dashed: true,
            })
            .render()
            .into_bytes(),
    );
    let metric_bars: Vec<(String, f64)> = models
        .iter()
        .flat_map(|m| {
            [
                (format!("{} MAE", short(&m.model_name)), m.mae),
                (format!("{} RMSE", short(&m.model_name)), m.rmse),
            ]
        })
        .collect();
    put(
        "figures/model_comparison.svg".into(),
        bar_chart("Cross-validated error", &metric_bars, None).into_bytes(),
    );
    let imp: Vec<(String, f64)> = report.forest.importance.iter().map(|(k, v)| (k.clone(), *v)).collect();
    put(
        "figures/forest_importance.svg".into(),
        bar_chart("Forest feature importance", &imp, None).into_bytes(),
    );
    Ok(files)
}

fn short(model: &str) -> &str {
    match model {
        "linear_regression" => "LR",
        "random_forest" => "RF",
        other => other,
    }
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn report_json(report: &AnalysisReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes report.txt, tables/ and figures/ (and report.json when
/// `with_json`) under `dir`.
pub fn write_report_dir(report: &AnalysisReport, dir: &Path, with_json: bool) -> Result<()> {
    fs::create_dir_all(dir)?;
    if with_json {
        write_atomic(&dir.join("report.json"), report_json(report)?.as_bytes())?;
    }
    write_atomic(&dir.join("report.txt"), render_text(report).as_bytes())?;
    for (rel, bytes) in render_artifacts(report)? {
        write_atomic(&dir.join(rel), &bytes)?;
    }
    Ok(())
}
