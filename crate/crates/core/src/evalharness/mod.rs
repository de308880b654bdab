//! Error metrics, k-fold cross-validation, paired model comparison and the
//! end-to-end analysis pipeline with its report.

mod compare;
mod cv;
mod metrics;
mod pipeline;
mod report;
pub mod svg;

pub use compare::{paired_t_test, PairedTTest, Winner};
pub use cv::{fold_assignment, kfold_cv, EvalSummary, FoldMetrics, ModelSpec, FOREST_MODEL_NAME, LINEAR_MODEL_NAME};
pub use metrics::{mae, pearson_r, rmse};
pub use pipeline::{analyze, compare_models, Analysis, AnalyzeOptions, DEFAULT_ALPHA, DEFAULT_K, PAIRING, STRICT_ALPHA};
pub use report::{
    coefficient_text, comparison_text, display_name, format_p, render_artifacts, render_text, report_json,
    write_atomic, write_report_dir, AnalysisReport, AnalysisSettings, ComparisonResult, CorrelationSection,
    DataSummary, EvaluationSection, FitSummary, ForestSection, OutlierSection, SignificanceMask, TransformSuggestion,
    VifSection,
};
