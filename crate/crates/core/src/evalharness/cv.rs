use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{mae, pearson_r, rmse};
use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::forest::{predict_frame, train_forest, ForestConfig};
use crate::linmodel::{finite, fit_ols, predict};
use crate::rng::stream_rng;

/// Stream reserved for fold shuffling, far from the per-tree streams.
const FOLD_STREAM: u64 = 1 << 63;

pub const LINEAR_MODEL_NAME: &str = "linear_regression";
pub const FOREST_MODEL_NAME: &str = "random_forest";

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Linear { predictors: Vec<String> },
    Forest { config: ForestConfig, predictors: Vec<String> },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Linear { .. } => LINEAR_MODEL_NAME,
            ModelSpec::Forest { .. } => FOREST_MODEL_NAME,
        }
    }

    /// Trains on `train` and predicts the rows of `test`.
    pub fn fit_predict(&self, train: &FactorFrame, test: &FactorFrame) -> Result<Vec<f64>> {
        let response = train.response_name();
        match self {
            ModelSpec::Linear { predictors } => {
                let fit = fit_ols(train, predictors, response)?;
                predict(&fit, &test.design(fit.slope_names())?)
            }
            ModelSpec::Forest { config, predictors } => {
                let model = train_forest(train, predictors, response, config)?;
                predict_frame(&model, test)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub size: usize,
    pub mae: f64,
    pub rmse: f64,
    /// `None` for folds too small or too flat to correlate.
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub model_name: String,
    pub k: usize,
    pub seed: u64,
    /// Pooled over all out-of-fold predictions.
    pub mae: f64,
    pub rmse: f64,
    /// Correlation of out-of-fold predictions with the response; `None`
    /// if the predictions are constant.
    pub pearson_r: Option<f64>,
    /// Square of `pearson_r`.
    pub r_squared: Option<f64>,
    pub per_fold: Vec<FoldMetrics>,
    /// Out-of-fold prediction for every row, in row order.
    pub predictions: Vec<f64>,
}

impl EvalSummary {
    pub fn fold_mae(&self) -> Vec<f64> {
        self.per_fold.iter().map(|f| f.mae).collect()
    }
}

/// Shuffles 0..n with the seed and cuts it into k contiguous folds, the
/// first n mod k of which hold one extra row. Each fold is sorted.
pub fn fold_assignment(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::ConfigInvalid(format!("k must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, FOLD_STREAM));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        let mut fold = order[start..start + len].to_vec();
        fold.sort_unstable();
        folds.push(fold);
        start += len;
    }
    Ok(folds)
}

pub fn kfold_cv(frame: &FactorFrame, spec: &ModelSpec, k: usize, seed: u64) -> Result<EvalSummary> {
    let n = frame.nrows();
    let folds = fold_assignment(n, k, seed)?;
    let y = frame.column(frame.response_name())?;

    let fold_predictions = folds
        .par_iter()
        .map(|test_rows| {
            let mut in_test = vec![false; n];
            for &i in test_rows {
                in_test[i] = true;
            }
            let train_rows: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
            spec.fit_predict(&frame.take_rows(&train_rows)?, &frame.take_rows(test_rows)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut predictions = vec![0.0; n];
    let mut per_fold = Vec::with_capacity(k);
    for (f, (rows, preds)) in folds.iter().zip(&fold_predictions).enumerate() {
        let actual: Vec<f64> = rows.iter().map(|&i| y[i]).collect();
        for (&i, &p) in rows.iter().zip(preds) {
            predictions[i] = p;
        }
        per_fold.push(FoldMetrics {
            fold: f + 1,
            size: rows.len(),
            mae: mae(&actual, preds)?,
            rmse: rmse(&actual, preds)?,
            r: pearson_r(&actual, preds).ok(),
        });
    }
    let r = pearson_r(&y, &predictions).ok().and_then(finite);
    Ok(EvalSummary {
        model_name: spec.name().into(),
        k,
        seed,
        mae: mae(&y, &predictions)?,
        rmse: rmse(&y, &predictions)?,
        pearson_r: r,
        r_squared: r.map(|r| r * r),
        per_fold,
        predictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_partition_rows() {
        for (n, k) in [(10, 3), (7, 7), (70, 10), (5, 2)] {
            let folds = fold_assignment(n, k, 11).unwrap();
            assert_eq!(folds.len(), k);
            let mut all: Vec<usize> = folds.concat();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
            let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
            assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
        assert_eq!(fold_assignment(9, 4, 5).unwrap(), fold_assignment(9, 4, 5).unwrap());
        assert!(matches!(fold_assignment(3, 4, 0), Err(Error::KTooLarge { k: 4, n: 3 })));
        assert!(fold_assignment(3, 1, 0).is_err());
    }
}
