use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use factorlab::dataset::{load_csv, synthesize, write_csv, FactorFrame, Schema, SynthConfig, DEFAULT_RESPONSE};
use factorlab::diagnostics::{diagnose, flag_outliers, DiagnosticsOptions};
use factorlab::evalharness::{
    analyze, coefficient_text, compare_models, comparison_text, format_p, report_json, write_atomic,
    write_report_dir, AnalysisReport, AnalyzeOptions, FitSummary, DEFAULT_ALPHA, DEFAULT_K,
};
use factorlab::forest::{
    feature_importance, forest_from_json, forest_to_json, predict_frame, train_forest, ForestConfig,
};
use factorlab::linmodel::{fit_ols, screen_predictors};
use factorlab::{Error, ErrorCategory, Result, SPEC_VERSION};

#[derive(Parser)]
#[command(name = "factorlab", version, about = "Stock-factor regression, diagnostics and model comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct Common {
    /// Input CSV (or report.json for `report`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = DEFAULT_RESPONSE)]
    response: String,
    /// Comma-separated predictor names; defaults to every other column.
    #[arg(long, value_delimiter = ',')]
    predictors: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    outlier_threshold: f64,
    #[arg(long, default_value_t = 4.0)]
    vif_threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Clone)]
struct ForestArgs {
    #[arg(long, default_value_t = 500)]
    trees: usize,
    /// Features tried per split; defaults to round(√p).
    #[arg(long)]
    m_try: Option<usize>,
    #[arg(long, default_value_t = 5)]
    min_leaf: usize,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    no_bootstrap: bool,
}

impl ForestArgs {
    fn config(&self, seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees: self.trees,
            m_try: self.m_try,
            min_leaf: self.min_leaf,
            max_depth: self.max_depth,
            seed,
            bootstrap: !self.no_bootstrap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic factor dataset as CSV.
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        companies: usize,
        #[arg(long, default_value_t = 14)]
        quarters: usize,
        /// Do not plant outlier rows.
        #[arg(long)]
        no_outliers: bool,
    },
    /// Validate a CSV file.
    Ingest {
        #[command(flatten)]
        common: Common,
    },
    /// One simple regression per predictor.
    Screen {
        #[command(flatten)]
        common: Common,
    },
    /// Multiple regression with coefficient inference and outlier flags.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Refit without the flagged rows.
        #[arg(long)]
        remove_outliers: bool,
    },
    /// Residual diagnostics for the multiple regression.
    Diagnose {
        #[command(flatten)]
        common: Common,
    },
    /// Train a random forest, or predict with a stored one via --model.
    Forest {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        forest: ForestArgs,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Cross-validated comparison of the linear model and the forest.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        forest: ForestArgs,
    },
    /// The full pipeline; writes a report directory.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        forest: ForestArgs,
        /// Drop predictors with VIF at or above the threshold, largest first.
        #[arg(long)]
        drop_collinear: bool,
        /// Refit without the flagged outlier rows.
        #[arg(long)]
        remove_outliers: bool,
    },
    /// Re-render text, tables and figures from a stored report.json.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::ConfigInvalid(format!("--{flag} is required")))
}

fn load(common: &Common) -> Result<FactorFrame> {
    let path = require(&common.input, "input")?;
    let mut schema = Schema::minimal(&common.response);
    if let Some(p) = &common.predictors {
        schema.required = p.clone();
    }
    load_csv(BufReader::new(File::open(path)?), &schema)
}

fn predictors(common: &Common, frame: &FactorFrame) -> Vec<String> {
    common
        .predictors
        .clone()
        .unwrap_or_else(|| frame.predictor_names())
}

fn emit(format: Format, value: serde_json::Value, text: String) -> Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?,
        Format::Text => write!(out, "{text}")?,
    }
    Ok(())
}

fn row_list(rows: &[usize]) -> String {
    if rows.is_empty() {
        "none".into()
    } else {
        rows.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Synth {
            common,
            companies,
            quarters,
            no_outliers,
        } => {
            let mut config = SynthConfig {
                companies,
                quarters,
                ..SynthConfig::with_seed(common.seed)
            };
            if no_outliers {
                config.outlier_rows.clear();
            }
            let frame = synthesize(&config)?;
            match &common.out {
                Some(path) => {
                    let mut buf = Vec::new();
                    write_csv(&frame, &mut buf)?;
                    write_atomic(path, &buf)?;
                }
                None => write_csv(&frame, io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Ingest { common } => {
            let frame = load(&common)?;
            let text = format!(
                "rows: {}\ncolumns: {}\nresponse: {}\n",
                frame.nrows(),
                frame.column_names().join(", "),
                frame.response_name()
            );
            emit(
                common.format,
                json!({
                    "spec_version": SPEC_VERSION,
                    "rows": frame.nrows(),
                    "columns": frame.column_names(),
                    "response": frame.response_name(),
                }),
                text,
            )
        }
        Command::Screen { common } => {
            let frame = load(&common)?;
            let rows = screen_predictors(&frame, &predictors(&common, &frame), frame.response_name())?;
            let mut text = format!("{:<10} {:>12} {:>11} {:>8} {:>12}\n", "Predictor", "F-statistic", "p-value", "R^2", "RSE");
            for r in &rows {
                text += &format!(
                    "{:<10} {:>12} {:>11} {:>8.4} {:>12.3}\n",
                    r.predictor,
                    r.f_stat.map_or("NA".into(), |f| format!("{f:.3}")),
                    format_p(r.f_p_value),
                    r.r_squared,
                    r.rse
                );
            }
            emit(common.format, json!({"spec_version": SPEC_VERSION, "screening": rows}), text)
        }
        Command::Fit { common, remove_outliers } => {
            let frame = load(&common)?;
            let preds = predictors(&common, &frame);
            let fit = fit_ols(&frame, &preds, frame.response_name())?;
            let flagged = flag_outliers(&fit, common.outlier_threshold)?;
            let (fit, removed) = if remove_outliers && !flagged.is_empty() {
                let keep: Vec<usize> = (0..frame.nrows()).filter(|i| !flagged.contains(&(i + 1))).collect();
                let reduced = frame.take_rows(&keep)?;
                (fit_ols(&reduced, &preds, frame.response_name())?, flagged.clone())
            } else {
                (fit, Vec::new())
            };
            let summary = FitSummary::from(&fit);
            let text = format!(
                "{}\nOutliers (|studentized residual| > {}): {}\nRows removed: {}\n",
                coefficient_text(&summary),
                common.outlier_threshold,
                row_list(&flagged),
                row_list(&removed)
            );
            emit(
                common.format,
                json!({
                    "spec_version": SPEC_VERSION,
                    "fit": summary,
                    "outliers": flagged,
                    "removed": removed,
                }),
                text,
            )
        }
        Command::Diagnose { common } => {
            let frame = load(&common)?;
            let preds = predictors(&common, &frame);
            let fit = fit_ols(&frame, &preds, frame.response_name())?;
            let options = DiagnosticsOptions {
                outlier_threshold: common.outlier_threshold,
                vif_threshold: common.vif_threshold,
                max_lag: None,
            };
            let report = diagnose(&fit, &frame, &options)?;
            let doc = json!({"spec_version": SPEC_VERSION, "diagnostics": report});
            if let Some(dir) = &common.out {
                let mut text = serde_json::to_string_pretty(&doc)?;
                text.push('\n');
                write_atomic(&dir.join("diagnostics.json"), text.as_bytes())?;
            }
            let mut text = String::from("VIF:\n");
            for (k, v) in &report.vif {
                let flag = if report.vif_flagged.contains(k) { "  >= threshold" } else { "" };
                text += &format!("  {k:<10} {v:>10.3}{flag}\n");
            }
            text += &format!("Outliers: {}\n", row_list(&report.outlier_indices));
            if let Some(f) = report.funnel {
                text += &format!(
                    "Funnel check: corr(|residual|, fitted) = {:.4}, p = {}\n",
                    f.correlation,
                    format_p(f.p_value)
                );
            }
            let outside = report.acf.iter().skip(1).filter(|(_, r)| r.abs() > report.acf_band).count();
            text += &format!(
                "Residual ACF: {} of {} lags outside ±{:.4}\n",
                outside,
                report.acf.len().saturating_sub(1),
                report.acf_band
            );
            emit(common.format, doc, text)
        }
        Command::Forest { common, forest, model } => {
            let frame = load(&common)?;
            if let Some(path) = model {
                let model = forest_from_json(&std::fs::read_to_string(path)?)?;
                let preds = predict_frame(&model, &frame)?;
                let text: String = preds.iter().map(|p| format!("{p}\n")).collect();
                return emit(
                    common.format,
                    json!({"spec_version": SPEC_VERSION, "predictions": preds}),
                    text,
                );
            }
            let preds = predictors(&common, &frame);
            let model = train_forest(&frame, &preds, frame.response_name(), &forest.config(common.seed))?;
            if let Some(dir) = &common.out {
                write_atomic(&dir.join("model").join("forest.json"), forest_to_json(&model)?.as_bytes())?;
            }
            let importance = feature_importance(&model);
            let mut text = format!(
                "{} trees, m_try = {}\nFeature importance:\n",
                model.trees.len(),
                model.config.m_try.unwrap_or_default()
            );
            for (k, v) in &importance {
                text += &format!("  {k:<10} {v:>8.4}\n");
            }
            emit(
                common.format,
                json!({"spec_version": SPEC_VERSION, "config": model.config, "importance": importance}),
                text,
            )
        }
        Command::Evaluate { common, forest } => {
            let frame = load(&common)?;
            let preds = predictors(&common, &frame);
            let (evaluation, comparison) = compare_models(
                &frame,
                &preds,
                &forest.config(common.seed),
                common.k,
                common.seed,
                common.alpha,
            )?;
            let text = comparison_text(&evaluation, &comparison);
            emit(
                common.format,
                json!({"spec_version": SPEC_VERSION, "evaluation": evaluation, "comparison": comparison}),
                text,
            )
        }
        Command::Analyze {
            common,
            forest,
            drop_collinear,
            remove_outliers,
        } => {
            let frame = load(&common)?;
            let dir = require(&common.out, "out")?;
            let options = AnalyzeOptions {
                predictors: common.predictors.clone(),
                seed: common.seed,
                k: common.k,
                alpha: common.alpha,
                outlier_threshold: common.outlier_threshold,
                vif_threshold: common.vif_threshold,
                drop_collinear,
                remove_outliers,
                forest: forest.config(common.seed),
            };
            let analysis = analyze(&frame, &options)?;
            write_report_dir(&analysis.report, dir, true)?;
            write_atomic(&dir.join("model").join("forest.json"), forest_to_json(&analysis.forest)?.as_bytes())?;
            let r = &analysis.report;
            let text = format!(
                "Report written to {}\n\n{}",
                dir.display(),
                comparison_text(&r.evaluation, &r.comparison)
            );
            emit(
                common.format,
                json!({
                    "spec_version": SPEC_VERSION,
                    "out": dir,
                    "winner": r.comparison.winner,
                    "p_value": r.comparison.p_value,
                }),
                text,
            )
        }
        Command::Report { common } => {
            let path = require(&common.input, "input")?;
            let report: AnalysisReport = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let dir = match &common.out {
                Some(d) => d.clone(),
                None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
            };
            // Re-serializing keeps report.json identical when re-rendering in
            // place and copies it when rendering elsewhere.
            write_atomic(&dir.join("report.json"), report_json(&report)?.as_bytes())?;
            write_report_dir(&report, &dir, false)?;
            emit(
                common.format,
                json!({"spec_version": SPEC_VERSION, "out": dir}),
                format!("Report rendered to {}\n", dir.display()),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let category = e.category();
            let doc = json!({
                "error": {
                    "kind": e.kind(),
                    "category": format!("{category:?}").to_lowercase(),
                    "message": e.to_string(),
                }
            });
            eprintln!("{doc}");
            ExitCode::from(match category {
                ErrorCategory::Input => 2,
                ErrorCategory::Numerical => 3,
                ErrorCategory::Internal => 1,
            })
        }
    }
}
