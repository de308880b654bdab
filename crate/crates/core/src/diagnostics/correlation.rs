use serde::{Deserialize, Serialize};

use crate::dataset::FactorFrame;
use crate::error::{Error, Result};
use crate::numkernel::student_t_p_two_sided;

/// Sample Pearson correlation; `None` when either input has zero variance
/// or the lengths differ or are below 2.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len();
    if n < 2 || b.len() != n {
        return None;
    }
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided p-value of H₀: ρ = 0 for a sample correlation on n pairs.
pub fn correlation_p_value(r: f64, n: usize) -> f64 {
    if n < 3 {
        return 1.0;
    }
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    student_t_p_two_sided(t, df).unwrap_or(1.0)
}

/// Pairwise Pearson correlations with a significance mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub r: Vec<Vec<f64>>,
    pub p_values: Vec<Vec<f64>>,
    pub alpha: f64,
    pub significant: Vec<Vec<bool>>,
}

impl CorrelationMatrix {
    /// Mask at another level; diagonal entries are always significant.
    pub fn mask_at(&self, alpha: f64) -> Vec<Vec<bool>> {
        self.p_values
            .iter()
            .map(|row| row.iter().map(|&p| p < alpha).collect())
            .collect()
    }
}

pub fn pearson_matrix<S: AsRef<str>>(frame: &FactorFrame, columns: &[S], alpha: f64) -> Result<CorrelationMatrix> {
    if columns.len() < 2 {
        return Err(Error::ConfigInvalid("correlation matrix needs at least 2 columns".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ConfigInvalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let names: Vec<String> = columns.iter().map(|c| c.as_ref().to_lowercase()).collect();
    let data = names.iter().map(|c| frame.column(c)).collect::<Result<Vec<_>>>()?;
    for (name, col) in names.iter().zip(&data) {
        if col.iter().all(|v| *v == col[0]) {
            return Err(Error::ZeroVariance(name.clone()));
        }
    }
    let n = frame.nrows();
    let k = names.len();
    let mut r = vec![vec![1.0; k]; k];
    let mut p = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let rij = pearson(&data[i], &data[j]).ok_or_else(|| Error::ZeroVariance(names[j].clone()))?;
            let pij = correlation_p_value(rij, n);
            r[i][j] = rij;
            r[j][i] = rij;
            p[i][j] = pij;
            p[j][i] = pij;
        }
    }
    let mut out = CorrelationMatrix {
        names,
        r,
        p_values: p,
        alpha,
        significant: Vec::new(),
    };
    out.significant = out.mask_at(alpha);
    Ok(out)
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
    fn hand_computed_half() {
        // centered x = (-1,0,1), y = (-1,1,0): Σxy = 1, Σx² = Σy² = 2
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matrix_structure() {
        let x = vec![1.0, 4.0, 2.0, 8.0, 5.0];
        let f = frame(vec![
            ("x", x.clone()),
            ("affine", x.iter().map(|v| 2.0 * v + 3.0).collect()),
            ("other", vec![3.0, 1.0, 4.0, 1.0, 5.0]),
        ]);
        let m = pearson_matrix(&f, &["x", "affine", "other"], 0.05).unwrap();
        for i in 0..3 {
            assert_eq!(m.r[i][i], 1.0);
            assert!(m.significant[i][i]);
            for j in 0..3 {
                assert_eq!(m.r[i][j], m.r[j][i]);
            }
        }
        assert!((m.r[0][1] - 1.0).abs() < 1e-12);
        assert!(m.significant[0][1]);
    }

    #[test]
    fn zero_variance_column() {
        let f = frame(vec![("x", vec![1.0, 2.0, 3.0]), ("flat", vec![1.0; 3])]);
        assert!(matches!(pearson_matrix(&f, &["x", "flat"], 0.05), Err(Error::ZeroVariance(ref c)) if c == "flat"));
    }

    #[test]
    fn stricter_level_is_subset() {
        let f = frame(vec![
            ("a", vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]),
            ("b", vec![1.2, 1.9, 3.5, 3.9, 5.5, 5.8, 7.4, 7.9]),
            ("c", vec![5.0, 1.0, 4.0, 2.0, 8.0, 3.0, 7.0, 6.0]),
        ]);
        let m = pearson_matrix(&f, &["a", "b", "c", "term"], 0.05).unwrap();
        let strict = m.mask_at(0.01);
        for i in 0..4 {
            for j in 0..4 {
                if strict[i][j] {
                    assert!(m.significant[i][j]);
                }
            }
        }
    }
}
