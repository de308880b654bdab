//! Random forest regression: bootstrap-aggregated regression trees with a
//! random feature subset drawn at every split.
//!
//! Tree `t` draws all of its randomness from `stream_rng(seed, t)`, so a
//! model depends only on the data and the configuration, never on how
//! training was scheduled across threads.

mod tree;

use indexmap::IndexMap;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use tree::{Node, RegressionTree};

use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;
use crate::rng::stream_rng;
use crate::SPEC_VERSION;
use tree::{grow, TreeParams};

pub const FOREST_FORMAT: &str = "factorlab-forest";
pub const FOREST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features sampled per split; `None` means round(√p).
    pub m_try: Option<usize>,
    pub min_leaf: usize,
    /// `None` grows until the leaf-size or purity rules stop it.
    pub max_depth: Option<usize>,
    pub seed: u64,
    pub bootstrap: bool,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 500,
            m_try: None,
            min_leaf: 5,
            max_depth: None,
            seed: 42,
            bootstrap: true,
        }
    }
}

/// round(√p), at least 1.
pub fn default_m_try(p: usize) -> usize {
    ((p as f64).sqrt().round() as usize).max(1)
}

impl ForestConfig {
    pub fn with_seed(seed: u64) -> Self {
        ForestConfig {
            seed,
            ..Self::default()
        }
    }

    /// Checks the configuration against `p` predictors and returns the
    /// effective m_try.
    pub fn resolve_m_try(&self, p: usize) -> Result<usize> {
        if self.n_trees == 0 {
            return Err(Error::ConfigInvalid("n_trees must be at least 1".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::ConfigInvalid("min_leaf must be at least 1".into()));
        }
        if p == 0 {
            return Err(Error::ConfigInvalid("forest needs at least one predictor".into()));
        }
        let m = self.m_try.unwrap_or_else(|| default_m_try(p));
        if m == 0 || m > p {
            return Err(Error::ConfigInvalid(format!("m_try must lie in 1..={p}, got {m}")));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    /// Stored with `m_try` resolved.
    pub config: ForestConfig,
    pub feature_names: Vec<String>,
    pub response_name: String,
    pub trees: Vec<RegressionTree>,
}

pub fn train_forest<S: AsRef<str>>(
    frame: &FactorFrame,
    predictors: &[S],
    response: &str,
    config: &ForestConfig,
) -> Result<ForestModel> {
    let names: Vec<String> = predictors.iter().map(|p| p.as_ref().to_lowercase()).collect();
    let x = frame.design(&names)?;
    let y = frame.column(response)?;
    train_forest_matrix(&x, &y, names, response, config)
}

/// Trains on a design matrix whose columns are `feature_names`.
pub fn train_forest_matrix(
    x: &DenseMatrix,
    y: &[f64],
    feature_names: Vec<String>,
    response: &str,
    config: &ForestConfig,
) -> Result<ForestModel> {
    let n = x.rows();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if feature_names.len() != x.cols() {
        return Err(Error::DimensionMismatch {
            expected: x.cols(),
            found: feature_names.len(),
        });
    }
    if n < 2 {
        return Err(Error::InsufficientRows { rows: n, required: 2 });
    }
    let m_try = config.resolve_m_try(x.cols())?;
    let columns: Vec<Vec<f64>> = (0..x.cols()).map(|j| x.column(j)).collect();
    let params = TreeParams {
        m_try,
        min_leaf: config.min_leaf,
        max_depth: config.max_depth,
    };

    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(config.seed, t as u64);
            let mut idx: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            grow(&columns, y, &mut idx, &params, &mut rng)
        })
        .collect();

    Ok(ForestModel {
        config: ForestConfig {
            m_try: Some(m_try),
            ..config.clone()
        },
        feature_names,
        response_name: response.to_lowercase(),
        trees,
    })
}

/// Mean of the tree predictions for each row of `rows`, whose columns must
/// follow `model.feature_names`.
pub fn predict_forest(model: &ForestModel, rows: &DenseMatrix) -> Result<Vec<f64>> {
    if rows.cols() != model.feature_names.len() {
        return Err(Error::DimensionMismatch {
            expected: model.feature_names.len(),
            found: rows.cols(),
        });
    }
    if model.trees.is_empty() {
        return Err(Error::ConfigInvalid("forest has no trees".into()));
    }
    let k = model.trees.len() as f64;
    Ok((0..rows.rows())
        .into_par_iter()
        .map(|i| {
            let row = rows.row(i);
            model.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / k
        })
        .collect())
}

/// Predicts for the rows of a frame holding every model feature.
pub fn predict_frame(model: &ForestModel, frame: &FactorFrame) -> Result<Vec<f64>> {
    predict_forest(model, &frame.design(&model.feature_names)?)
}

/// Share of the total split gain attributed to each feature; all zeros when
/// no tree ever split.
pub fn feature_importance(model: &ForestModel) -> IndexMap<String, f64> {
    let mut totals = vec![0.0; model.feature_names.len()];
    for tree in &model.trees {
        tree.add_gains(&mut totals);
    }
    let sum: f64 = totals.iter().sum();
    if sum > 0.0 {
        for v in &mut totals {
            *v /= sum;
        }
    }
    model.feature_names.iter().cloned().zip(totals).collect()
}

#[derive(Serialize, Deserialize)]
struct ForestDocument {
    format: String,
    version: u32,
    spec_version: String,
    #[serde(flatten)]
    model: ForestModel,
}

pub fn forest_to_json(model: &ForestModel) -> Result<String> {
    let doc = ForestDocument {
        format: FOREST_FORMAT.into(),
        version: FOREST_FORMAT_VERSION,
        spec_version: SPEC_VERSION.into(),
        model: model.clone(),
    };
    Ok(serde_json::to_string(&doc)?)
}

pub fn forest_from_json(text: &str) -> Result<ForestModel> {
    let doc: ForestDocument = serde_json::from_str(text)?;
    if doc.format != FOREST_FORMAT || doc.version != FOREST_FORMAT_VERSION {
        return Err(Error::Schema(format!(
            "unsupported forest document {} v{}",
            doc.format, doc.version
        )));
    }
    let model = doc.model;
    let p = model.feature_names.len();
    model.config.resolve_m_try(p)?;
    if model.trees.len() != model.config.n_trees {
        return Err(Error::Schema(format!(
            "forest declares {} trees but holds {}",
            model.config.n_trees,
            model.trees.len()
        )));
    }
    if model.trees.iter().filter_map(|t| t.max_feature()).any(|f| f >= p) {
        return Err(Error::Schema("tree references a feature outside feature_names".into()));
    }
    Ok(model)
}
