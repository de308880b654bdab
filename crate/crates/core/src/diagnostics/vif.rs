use indexmap::IndexMap;
use rayon::prelude::*;

use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::linmodel::fit_ols;
use crate::numkernel::{NumError, QrDecomposition};

pub const DEFAULT_VIF_THRESHOLD: f64 = 4.0;

/// Variance inflation factor of each predictor, 1/(1 − R²ⱼ) with R²ⱼ from
/// regressing predictor j on all the others (with intercept).
pub fn vif<S: AsRef<str> + Sync>(frame: &FactorFrame, predictors: &[S]) -> Result<IndexMap<String, f64>> {
    let names: Vec<String> = predictors.iter().map(|p| p.as_ref().to_lowercase()).collect();
    if names.len() < 2 {
        return Err(Error::ConfigInvalid("VIF needs at least 2 predictors".into()));
    }
    // An exactly dependent predictor set makes some auxiliary regression
    // singular; find the first offending column up front.
    let design = frame.design(&names)?.with_intercept();
    if design.rows() >= design.cols() {
        if let Err(NumError::RankDeficient { column }) = QrDecomposition::factor(&design) {
            return Err(Error::CollinearSingular(names[column.saturating_sub(1)].clone()));
        }
    }

    let values: Vec<f64> = (0..names.len())
        .into_par_iter()
        .map(|j| {
            let others: Vec<&String> = names.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, n)| n).collect();
            let aux = fit_ols(frame, &others, &names[j]).map_err(|e| match e {
                Error::RankDeficient(_) => Error::CollinearSingular(names[j].clone()),
                other => other,
            })?;
            // 1 − R² = RSS/TSS
            if aux.rss <= 0.0 || aux.tss <= 0.0 {
                return Err(Error::CollinearSingular(names[j].clone()));
            }
            Ok((aux.tss / aux.rss).max(1.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(names.into_iter().zip(values).collect())
}

/// Predictors whose VIF is at or above `threshold`, in map order.
pub fn vif_flagged(vifs: &IndexMap<String, f64>, threshold: f64) -> Vec<String> {
    vifs.iter().filter(|(_, v)| **v >= threshold).map(|(k, _)| k.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(cols: Vec<(&str, Vec<f64>)>) -> FactorFrame {
        let n = cols[0].1.len();
        let mut all: Vec<(String, Vec<f64>)> = vec![
            ("term".into(), (1..=n).map(|i| i as f64).collect()),
            ("panel".into(), vec![1.0; n]),
            ("price".into(), vec![0.0; n]),
        ];
        all.extend(cols.into_iter().map(|(k, v)| (k.to_string(), v)));
        FactorFrame::from_columns(all, "price", "term", "panel").unwrap()
    }

    #[test]
    fn orthogonal_centered_design_has_unit_vifs() {
        let f = frame(vec![
            ("a", vec![1.0, -1.0, 1.0, -1.0]),
            ("b", vec![1.0, 1.0, -1.0, -1.0]),
            ("c", vec![1.0, -1.0, -1.0, 1.0]),
        ]);
        let v = vif(&f, &["a", "b", "c"]).unwrap();
        assert_eq!(v.keys().collect::<Vec<_>>(), ["a", "b", "c"]);
        for x in v.values() {
            assert!((x - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pairwise_closed_form() {
        // centered: a = (-2,-1,0,1,2); choose b with r(a,b) = 0.8 exactly:
        // b = 0.8·a + 0.6·‖a‖/‖w‖·w with w ⟂ a, w centered.
        let a = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = [2.0, -1.0, -2.0, -1.0, 2.0];
        let scale = 0.6 * (10.0f64).sqrt() / (14.0f64).sqrt();
        let b: Vec<f64> = a.iter().zip(&w).map(|(x, y)| 0.8 * x + scale * y).collect();
        let f = frame(vec![("a", a.to_vec()), ("b", b)]);
        let v = vif(&f, &["a", "b"]).unwrap();
        let expected = 1.0 / (1.0 - 0.64);
        assert!((v["a"] - expected).abs() < 1e-9);
        assert!((v["b"] - expected).abs() < 1e-9);
        assert!((expected - 2.7778).abs() < 1e-4);
    }

    #[test]
    fn duplicated_column_is_singular() {
        let x = vec![1.0, 3.0, 2.0, 5.0, 4.0];
        let f = frame(vec![("a", x.clone()), ("b", x), ("c", vec![1.0, 0.0, 2.0, 1.0, 3.0])]);
        assert!(matches!(vif(&f, &["a", "b", "c"]), Err(Error::CollinearSingular(ref c)) if c == "b"));
        assert!(matches!(vif(&f, &["a", "b"]), Err(Error::CollinearSingular(_))));
    }

    #[test]
    fn needs_two_predictors() {
        let f = frame(vec![("a", vec![1.0, 2.0, 3.0])]);
        assert!(vif(&f, &["a"]).is_err());
    }

    #[test]
    fn flags_at_threshold() {
        let m: IndexMap<String, f64> = [("a".to_string(), 1.5), ("b".to_string(), 4.0), ("c".to_string(), 9.0)].into();
        assert_eq!(vif_flagged(&m, 4.0), vec!["b", "c"]);
    }
}
